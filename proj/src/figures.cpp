#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "skillscape/experiment.hpp"
#include "skillscape/io.hpp"

namespace skillscape {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 60, kRight = 190, kTop = 40, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) { return format_fixed(v, 2); }

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string file_stem(const std::string& model, const std::string& hierarchy) {
    std::string s = model + "_" + hierarchy;
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    return s;
}

std::string render_svg(const std::string& model, const std::string& hierarchy, int L_h,
                       const std::map<std::string, std::vector<const SeriesPoint*>>& series,
                       const std::vector<std::string>& method_order) {
    const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + x * plot_w; };
    auto py = [&](double y) { return kTop + (1.0 - y) * plot_h; };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
      << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight) << "\" fill=\"white\"/>\n";
    s << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape_xml(model + " data, " + hierarchy + " hierarchy (L_h = " + std::to_string(L_h) + ")") << "</text>\n";

    for (int t = 0; t <= 4; ++t) {
        const double y = t / 4.0;
        s << "<line x1=\"" << num(px(0)) << "\" y1=\"" << num(py(y)) << "\" x2=\"" << num(px(1)) << "\" y2=\""
          << num(py(y)) << "\" stroke=\"#dddddd\"/>\n";
        s << "<text x=\"" << num(px(0) - 6) << "\" y=\"" << num(py(y) + 4) << "\" text-anchor=\"end\">"
          << format_fixed(y, 2) << "</text>\n";
    }
    for (int t = 0; t <= 5; ++t) {
        const double x = t / 5.0;
        s << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(py(0)) << "\" x2=\"" << num(px(x)) << "\" y2=\""
          << num(py(0) + 5) << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << num(px(x)) << "\" y=\"" << num(py(0) + 18) << "\" text-anchor=\"middle\">"
          << format_fixed(x, 1) << "</text>\n";
    }
    s << "<rect x=\"" << num(px(0)) << "\" y=\"" << num(py(1)) << "\" width=\"" << num(plot_w) << "\" height=\""
      << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    s << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 10)
      << "\" text-anchor=\"middle\">proportion of possible profiles present</text>\n";
    s << "<text transform=\"translate(16 " << num(kTop + plot_h / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">mean ARI</text>\n";

    bool any_clipped = false;
    int legend_row = 0;
    for (std::size_t m = 0; m < method_order.size(); ++m) {
        auto it = series.find(method_order[m]);
        if (it == series.end()) continue;
        const char* color = kPalette[m % std::size(kPalette)];
        s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto* p : it->second) s << num(px(p->proportion)) << ',' << num(py(std::clamp(p->mean_ari, 0.0, 1.0))) << ' ';
        s << "\"/>\n";
        for (const auto* p : it->second) {
            const bool clipped = p->mean_ari < 0;
            any_clipped |= clipped;
            s << "<circle cx=\"" << num(px(p->proportion)) << "\" cy=\"" << num(py(std::clamp(p->mean_ari, 0.0, 1.0)))
              << "\" r=\"2.5\" fill=\"" << color << "\"" << (clipped ? " stroke=\"red\" stroke-width=\"1.5\"" : "")
              << "><title>" << escape_xml(it->first) << " size " << p->subset_size << ": "
              << format_fixed(p->mean_ari, 4) << "</title></circle>\n";
        }
        const double ly = kTop + 10 + 18 * legend_row++;
        const double lx = kWidth - kRight + 15;
        s << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 20) << "\" y2=\"" << num(ly)
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        s << "<text x=\"" << num(lx + 26) << "\" y=\"" << num(ly + 4) << "\">" << escape_xml(it->first) << "</text>\n";
    }
    if (any_clipped) {
        s << "<text x=\"" << num(kWidth - kRight + 15) << "\" y=\"" << num(kTop + 14 + 18 * legend_row)
          << "\" fill=\"red\">red ring: mean ARI &lt; 0, drawn at 0</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace

std::vector<std::filesystem::path> render_figures(const std::vector<ResultRow>& rows,
                                                  const std::filesystem::path& out_dir) {
    if (rows.empty()) throw std::invalid_argument("no result rows to plot");
    std::filesystem::create_directories(out_dir);

    // Method order follows first appearance in the rows, which is config order.
    std::vector<std::string> method_order;
    std::map<std::pair<std::string, std::string>, int> L_of;
    std::vector<std::pair<std::string, std::string>> panel_order;
    for (const auto& r : rows) {
        if (std::find(method_order.begin(), method_order.end(), r.method) == method_order.end())
            method_order.push_back(r.method);
        auto key = std::make_pair(r.generating_model, r.hierarchy);
        if (!L_of.count(key)) panel_order.push_back(key);
        L_of[key] = r.L_h;
    }

    const auto points = mean_ari_series(rows);
    std::map<std::pair<std::string, std::string>, std::map<std::string, std::vector<const SeriesPoint*>>> panels;
    for (const auto& p : points) panels[{p.generating_model, p.hierarchy}][p.method].push_back(&p);
    for (auto& [key, by_method] : panels)
        for (auto& [method, pts] : by_method)
            std::sort(pts.begin(), pts.end(), [](auto* a, auto* b) { return a->proportion < b->proportion; });

    std::vector<std::filesystem::path> written;
    for (const auto& key : panel_order) {
        const auto path = out_dir / (file_stem(key.first, key.second) + ".svg");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write figure " + path.string());
        out << render_svg(key.first, key.second, L_of[key], panels[key], method_order);
        if (!out) throw std::runtime_error("failed writing figure " + path.string());
        written.push_back(path);
    }
    return written;
}

void write_run_outputs(const ExperimentRun& run, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_csv(run.rows, out_dir / "results.csv");
    // Plot what was written, so `plot` on results.csv redraws the same figures.
    if (!run.rows.empty()) render_figures(read_results_csv(out_dir / "results.csv"), out_dir / "figures");
    const auto meta_path = out_dir / "run_meta.json";
    std::ofstream meta(meta_path, std::ios::binary);
    if (!meta) throw std::runtime_error("cannot write " + meta_path.string());
    meta << run.meta.dump(2) << '\n';
}

}  // namespace skillscape
