#include "uavcov/svgplot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "uavcov/sweep.hpp"

namespace uavcov {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Canvas {
    std::ostringstream body;
    double width = 660, height = 480;
    double ml = 70, mr = 20, mt = 34, mb = 52;
    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    bool x_log = false;

    double tx(double x) const {
        const double f = x_log ? (std::log10(x) - std::log10(x_min)) /
                                     (std::log10(x_max) - std::log10(x_min))
                               : (x - x_min) / (x_max - x_min);
        return ml + f * (width - ml - mr);
    }
    double ty(double y) const {
        const double f = (y - y_min) / (y_max - y_min);
        return height - mb - f * (height - mb - mt);
    }

    void line(double x1, double y1, double x2, double y2, const std::string& style) {
        body << "<line x1='" << num(x1) << "' y1='" << num(y1) << "' x2='" << num(x2)
             << "' y2='" << num(y2) << "' " << style << "/>\n";
    }
    void text(double x, double y, const std::string& s, const std::string& attrs = "") {
        body << "<text x='" << num(x) << "' y='" << num(y)
             << "' font-family='sans-serif' font-size='12' " << attrs << ">" << s
             << "</text>\n";
    }

    void axes(const std::string& xlabel, const std::string& ylabel,
              const std::string& title) {
        const std::string st = "stroke='black' stroke-width='1'";
        line(ml, mt, ml, height - mb, st);
        line(ml, height - mb, width - mr, height - mb, st);
        text(width / 2 - 4.0 * title.size() / 2.0 * 1.2, mt - 12, title,
             "font-weight='bold'");
        text((ml + width - mr) / 2 - 3.0 * xlabel.size(), height - 14, xlabel);
        body << "<text x='16' y='" << num((mt + height - mb) / 2)
             << "' font-family='sans-serif' font-size='12' transform='rotate(-90 16 "
             << num((mt + height - mb) / 2) << ")'>" << ylabel << "</text>\n";

        // y ticks
        for (int i = 0; i <= 5; ++i) {
            const double v = y_min + (y_max - y_min) * i / 5.0;
            const double y = ty(v);
            line(ml - 4, y, ml, y, st);
            text(ml - 44, y + 4, num(v));
        }
        // x ticks
        if (x_log) {
            const int e0 = static_cast<int>(std::ceil(std::log10(x_min) - 1e-9));
            const int e1 = static_cast<int>(std::floor(std::log10(x_max) + 1e-9));
            for (int e = e0; e <= e1; ++e) {
                const double v = std::pow(10.0, e);
                const double x = tx(v);
                line(x, height - mb, x, height - mb + 4, st);
                text(x - 14, height - mb + 18, "1e" + std::to_string(e));
            }
        } else {
            for (int i = 0; i <= 5; ++i) {
                const double v = x_min + (x_max - x_min) * i / 5.0;
                const double x = tx(v);
                line(x, height - mb, x, height - mb + 4, st);
                text(x - 12, height - mb + 18, num(v));
            }
        }
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                  bool dashed, bool dotted) {
        body << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5'";
        if (dashed) body << " stroke-dasharray='8,4'";
        if (dotted) body << " stroke-dasharray='2,3'";
        body << " points='";
        for (const auto& [x, y] : pts) body << num(tx(x)) << "," << num(ty(y)) << " ";
        body << "'/>\n";
    }

    void marker(double x, double y, const std::string& color) {
        body << "<circle cx='" << num(tx(x)) << "' cy='" << num(ty(y))
             << "' r='3' fill='none' stroke='" << color << "'/>\n";
    }

    std::string finish() const {
        std::ostringstream os;
        os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << num(width) << "' height='"
           << num(height) << "' viewBox='0 0 " << num(width) << " " << num(height) << "'>\n"
           << "<rect width='100%' height='100%' fill='white'/>\n"
           << body.str() << "</svg>\n";
        return os.str();
    }
};

std::string heat_color(double v) {
    v = std::clamp(v, 0.0, 1.0);
    // dark blue -> teal -> yellow
    const double stops[3][3] = {{26, 42, 108}, {38, 145, 140}, {253, 187, 45}};
    const double f = v * 2.0;
    const int s = f < 1.0 ? 0 : 1;
    const double g = f - s;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                  static_cast<int>(stops[s][0] + g * (stops[s + 1][0] - stops[s][0])),
                  static_cast<int>(stops[s][1] + g * (stops[s + 1][1] - stops[s][1])),
                  static_cast<int>(stops[s][2] + g * (stops[s + 1][2] - stops[s][2])));
    return buf;
}

double row_value(const ResultRow& r) {
    if (r.analytic) return *r.analytic;
    if (r.mc) return *r.mc;
    return std::nan("");
}

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::string write_file(const std::string& dir, const std::string& name,
                       const std::string& content) {
    const auto path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

/// Marching-squares contour segments with one label per level, placed on
/// the segment nearest the plot centre.
void draw_contours(Canvas& c, const std::vector<double>& xs, const std::vector<double>& ys,
                   const std::vector<std::vector<double>>& grid, double level) {
    std::vector<std::array<double, 4>> segments;
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
        for (size_t j = 0; j + 1 < ys.size(); ++j) {
            const double v00 = grid[i][j], v10 = grid[i + 1][j];
            const double v01 = grid[i][j + 1], v11 = grid[i + 1][j + 1];
            std::vector<std::pair<double, double>> pts;
            auto edge = [&](double xa, double ya, double va, double xb, double yb, double vb) {
                if ((va < level) != (vb < level)) {
                    const double f = (level - va) / (vb - va);
                    pts.emplace_back(xa + f * (xb - xa), ya + f * (yb - ya));
                }
            };
            edge(xs[i], ys[j], v00, xs[i + 1], ys[j], v10);
            edge(xs[i + 1], ys[j], v10, xs[i + 1], ys[j + 1], v11);
            edge(xs[i], ys[j + 1], v01, xs[i + 1], ys[j + 1], v11);
            edge(xs[i], ys[j], v00, xs[i], ys[j + 1], v01);
            if (pts.size() >= 2) {
                segments.push_back({pts[0].first, pts[0].second, pts[1].first, pts[1].second});
            }
        }
    }
    if (segments.empty()) return;
    size_t best = 0;
    double best_dist = 1e300;
    const double cx = 0.5 * (c.ml + c.width - c.mr);
    const double cy = 0.5 * (c.mt + c.height - c.mb);
    for (size_t s = 0; s < segments.size(); ++s) {
        const auto& seg = segments[s];
        c.line(c.tx(seg[0]), c.ty(seg[1]), c.tx(seg[2]), c.ty(seg[3]),
               "stroke='white' stroke-width='1.4'");
        const double dx = c.tx(seg[0]) - cx;
        const double dy = c.ty(seg[1]) - cy;
        if (dx * dx + dy * dy < best_dist) {
            best_dist = dx * dx + dy * dy;
            best = s;
        }
    }
    c.text(c.tx(segments[best][0]) + 3, c.ty(segments[best][1]) - 3, num(level),
           "fill='white'");
}

std::vector<std::string> association_heatmaps(const std::vector<ResultRow>& rows,
                                              const std::string& dir) {
    std::vector<std::string> written;
    std::vector<const ResultRow*> assoc;
    for (const auto& r : rows) {
        if (r.quantity == "association" && !std::isnan(row_value(r))) assoc.push_back(&r);
    }
    if (assoc.empty()) return written;

    std::vector<double> ts, hs, ls;
    for (auto* r : assoc) {
        ts.push_back(r->t);
        hs.push_back(r->h_r);
        ls.push_back(r->lambda_r);
    }
    ts = sorted_unique(ts);
    hs = sorted_unique(hs);
    ls = sorted_unique(ls);
    if (hs.size() < 2 || ls.size() < 2) return written;

    for (double t : ts) {
        std::map<std::pair<double, double>, double> cell;
        for (auto* r : assoc) {
            if (r->t == t) cell[{r->lambda_r, r->h_r}] = row_value(*r);
        }
        if (cell.size() != ls.size() * hs.size()) continue;

        Canvas c;
        c.x_log = true;
        c.x_min = ls.front();
        c.x_max = ls.back();
        c.y_min = hs.front();
        c.y_max = hs.back();
        // cells first, then axes and contours on top
        for (size_t i = 0; i < ls.size(); ++i) {
            for (size_t j = 0; j < hs.size(); ++j) {
                const double x0 = c.tx(i == 0 ? ls[0] : std::sqrt(ls[i - 1] * ls[i]));
                const double x1 =
                    c.tx(i + 1 == ls.size() ? ls.back() : std::sqrt(ls[i] * ls[i + 1]));
                const double y0 = c.ty(j == 0 ? hs[0] : 0.5 * (hs[j - 1] + hs[j]));
                const double y1 =
                    c.ty(j + 1 == hs.size() ? hs.back() : 0.5 * (hs[j] + hs[j + 1]));
                c.body << "<rect x='" << num(x0) << "' y='" << num(y1) << "' width='"
                       << num(x1 - x0) << "' height='" << num(y0 - y1) << "' fill='"
                       << heat_color(cell[{ls[i], hs[j]}]) << "'/>\n";
            }
        }
        std::vector<std::vector<double>> grid(ls.size(), std::vector<double>(hs.size()));
        for (size_t i = 0; i < ls.size(); ++i) {
            for (size_t j = 0; j < hs.size(); ++j) grid[i][j] = cell[{ls[i], hs[j]}];
        }
        for (double level : {0.25, 0.5, 0.75}) draw_contours(c, ls, hs, grid, level);
        c.axes("RN density [1/m^2]", "RN altitude [m]",
               "Relay association probability, t = " + num(t) + " s");
        written.push_back(write_file(dir, "association_t" + num(t) + ".svg", c.finish()));
    }
    return written;
}

std::vector<std::string> beta_curves(const std::vector<ResultRow>& rows,
                                     const std::string& dir) {
    std::vector<std::string> written;
    std::vector<const ResultRow*> cps;
    std::vector<double> betas;
    for (const auto& r : rows) {
        if (r.quantity == "association" || std::isnan(row_value(r))) continue;
        cps.push_back(&r);
        betas.push_back(r.beta_db);
    }
    betas = sorted_unique(betas);
    if (cps.empty() || betas.size() < 2) return written;

    Canvas c;
    c.x_min = betas.front();
    c.x_max = betas.back();
    c.y_min = 0.0;
    c.y_max = 1.0;

    // series keyed by (quantity, h_r, t)
    std::map<std::tuple<std::string, double, double>, std::vector<const ResultRow*>> series;
    std::vector<double> hs;
    std::vector<double> ts;
    for (auto* r : cps) {
        series[{r->quantity, r->h_r, r->t}].push_back(r);
        hs.push_back(r->h_r);
        ts.push_back(r->t);
    }
    hs = sorted_unique(hs);
    ts = sorted_unique(ts);

    double legend_y = c.mt + 12;
    for (auto& [key, pts] : series) {
        const auto& [quantity, h_r, t] = key;
        std::sort(pts.begin(), pts.end(),
                  [](auto* a, auto* b) { return a->beta_db < b->beta_db; });
        const size_t hi =
            std::find(hs.begin(), hs.end(), h_r) - hs.begin();
        const std::string color = kPalette[hi % 6];
        const bool dashed = quantity == "direct_link";
        const bool dotted = !dashed && ts.size() > 1 && t == ts.back();
        std::vector<std::pair<double, double>> line;
        for (auto* r : pts) {
            if (r->analytic) line.emplace_back(r->beta_db, *r->analytic);
            if (r->mc) c.marker(r->beta_db, *r->mc, color);
        }
        if (line.size() >= 2) c.polyline(line, color, dashed, dotted);
        std::ostringstream label;
        label << quantity << " h=" << num(h_r) << " t=" << num(t);
        c.text(c.width - 240, legend_y, label.str(), "fill='" + color + "'");
        legend_y += 14;
    }
    c.axes("SINR threshold [dB]", "coverage probability", "Coverage vs threshold");
    written.push_back(write_file(dir, "cp_vs_beta.svg", c.finish()));
    return written;
}

std::vector<std::string> time_curves(const std::vector<ResultRow>& rows,
                                     const std::string& dir) {
    std::vector<std::string> written;
    std::vector<const ResultRow*> cps;
    std::vector<double> ts;
    std::vector<double> betas;
    for (const auto& r : rows) {
        if (r.quantity == "association" || std::isnan(row_value(r))) continue;
        cps.push_back(&r);
        ts.push_back(r.t);
        betas.push_back(r.beta_db);
    }
    ts = sorted_unique(ts);
    betas = sorted_unique(betas);
    if (cps.empty() || ts.size() < 3 || betas.size() != 1) return written;

    Canvas c;
    c.x_min = ts.front();
    c.x_max = ts.back();
    c.y_min = 0.0;
    c.y_max = 1.0;

    std::map<std::pair<std::string, double>, std::vector<const ResultRow*>> series;
    std::vector<double> hs;
    for (auto* r : cps) {
        series[{r->quantity, r->h_r}].push_back(r);
        hs.push_back(r->h_r);
    }
    hs = sorted_unique(hs);

    double legend_y = c.mt + 12;
    for (auto& [key, pts] : series) {
        const auto& [quantity, h_r] = key;
        std::sort(pts.begin(), pts.end(), [](auto* a, auto* b) { return a->t < b->t; });
        const size_t hi = std::find(hs.begin(), hs.end(), h_r) - hs.begin();
        const std::string color = kPalette[hi % 6];
        const bool dotted = quantity == "relay_link";
        std::vector<std::pair<double, double>> line;
        for (auto* r : pts) {
            if (r->analytic) line.emplace_back(r->t, *r->analytic);
            if (r->mc) c.marker(r->t, *r->mc, color);
        }
        if (line.size() >= 2) c.polyline(line, color, false, dotted);
        std::ostringstream label;
        label << quantity << " h=" << num(h_r);
        c.text(c.width - 220, legend_y, label.str(), "fill='" + color + "'");
        legend_y += 14;
    }
    c.axes("time [s]", "coverage probability",
           "Coverage vs time, threshold " + num(betas.front()) + " dB");
    written.push_back(write_file(dir, "cp_vs_time.svg", c.finish()));
    return written;
}

}  // namespace

std::vector<std::string> emit_plots(const std::vector<ResultRow>& rows,
                                    const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> written;
    for (auto& p : association_heatmaps(rows, dir)) written.push_back(p);
    for (auto& p : beta_curves(rows, dir)) written.push_back(p);
    for (auto& p : time_curves(rows, dir)) written.push_back(p);
    return written;
}

}  // namespace uavcov
