#pragma once

#include "skillscape/clustering/hclust.hpp"
#include "skillscape/clustering/kmeans.hpp"
#include "skillscape/clustering/lcvqe.hpp"
#include "skillscape/clustering/seeding.hpp"
#include "skillscape/clustering/types.hpp"
