#include "esnf/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace esnf {

namespace {

constexpr const char* kColorMinus = "#1f6fb4";  // label -1
constexpr const char* kColorPlus = "#d62728";   // label +1
constexpr const char* kColorError = "#999999";

std::string fmt(double v, const char* spec = "%.2f")
{
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return std::string(buf);
}

void append_tag(std::string& out, const std::string& tag) { out += tag; out += '\n'; }

// Five-stop gradient from dark blue-violet to yellow; t in [0,1].
std::string heat_color(double t)
{
    static const int stops[5][3] = {
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    t = std::clamp(t, 0.0, 1.0);
    const double x = t * 4.0;
    const int k = std::min(3, static_cast<int>(x));
    const double f = x - k;
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                  static_cast<int>(std::lround(stops[k][0] + f * (stops[k + 1][0] - stops[k][0]))),
                  static_cast<int>(std::lround(stops[k][1] + f * (stops[k + 1][1] - stops[k][1]))),
                  static_cast<int>(std::lround(stops[k][2] + f * (stops[k + 1][2] - stops[k][2]))));
    return std::string(buf);
}

struct Frame {
    double x0, y0, w, h;  // plot area in pixels

    double px(double u) const { return x0 + u * w; }        // u in [0,1]
    double py(double v) const { return y0 + (1.0 - v) * h; } // v in [0,1], y up
};

void draw_axes_box(std::string& out, const Frame& f)
{
    append_tag(out, "<rect x=\"" + fmt(f.x0) + "\" y=\"" + fmt(f.y0) + "\" width=\"" +
                        fmt(f.w) + "\" height=\"" + fmt(f.h) +
                        "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>");
}

}  // namespace

std::string render_scatter_svg(const StateCloud& cloud, std::size_t max_points)
{
    if (cloud.dim != 2 && !cloud.empty())
        throw std::invalid_argument("render requires 2 neurons");

    const double size = 860.0;
    const Frame f{50.0, 10.0, 800.0, 800.0};

    std::string out;
    out.reserve(1 << 16);
    append_tag(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    append_tag(out, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(size) +
                        "\" height=\"" + fmt(size) + "\" viewBox=\"0 0 " + fmt(size) +
                        " " + fmt(size) + "\">");
    draw_axes_box(out, f);

    // Ticks at -1, -0.5, 0, 0.5, 1 on both axes.
    for (int k = 0; k <= 4; ++k) {
        const double v = -1.0 + 0.5 * k;
        const double u = (v + 1.0) / 2.0;
        const std::string label = fmt(v, "%.1f");
        append_tag(out, "<line x1=\"" + fmt(f.px(u)) + "\" y1=\"" + fmt(f.y0 + f.h) +
                            "\" x2=\"" + fmt(f.px(u)) + "\" y2=\"" +
                            fmt(f.y0 + f.h + 6) + "\" stroke=\"black\"/>");
        append_tag(out, "<text x=\"" + fmt(f.px(u)) + "\" y=\"" + fmt(f.y0 + f.h + 20) +
                            "\" font-size=\"12\" text-anchor=\"middle\">" + label +
                            "</text>");
        append_tag(out, "<line x1=\"" + fmt(f.x0 - 6) + "\" y1=\"" + fmt(f.py(u)) +
                            "\" x2=\"" + fmt(f.x0) + "\" y2=\"" + fmt(f.py(u)) +
                            "\" stroke=\"black\"/>");
        append_tag(out, "<text x=\"" + fmt(f.x0 - 10) + "\" y=\"" + fmt(f.py(u) + 4) +
                            "\" font-size=\"12\" text-anchor=\"end\">" + label +
                            "</text>");
    }

    if (!cloud.empty()) {
        std::size_t stride = 1;
        if (max_points > 0 && cloud.size() > max_points)
            stride = (cloud.size() + max_points - 1) / max_points;
        for (std::size_t i = 0; i < cloud.size(); i += stride) {
            const double u = (cloud.coord(i, 0) + 1.0) / 2.0;
            const double v = (cloud.coord(i, 1) + 1.0) / 2.0;
            const char* color = cloud.labels[i] > 0 ? kColorPlus : kColorMinus;
            append_tag(out, "<circle cx=\"" + fmt(f.px(u)) + "\" cy=\"" + fmt(f.py(v)) +
                                "\" r=\"1\" fill=\"" + color + "\"/>");
        }
    }

    append_tag(out, "</svg>");
    return out;
}

std::string render_surface_svg(const SweepResult& result)
{
    const std::size_t na = result.alphas.size();
    const std::size_t nb = result.betas.size();
    if (na == 0 || nb == 0 || result.cells.size() != na * nb)
        throw std::invalid_argument("render surface: ragged grid");

    double vmin = 0.0, vmax = 0.0;
    bool first = true;
    for (const auto& c : result.cells) {
        if (!c.error.empty()) continue;
        if (first) {
            vmin = vmax = c.d_f;
            first = false;
        } else {
            vmin = std::min(vmin, c.d_f);
            vmax = std::max(vmax, c.d_f);
        }
    }
    if (first) vmin = vmax = 0.0;       // every cell failed
    const double span = vmax > vmin ? vmax - vmin : 1.0;

    const Frame f{70.0, 20.0, 640.0, 640.0};
    const double width = 880.0, height = 740.0;
    const double cw = f.w / static_cast<double>(na);
    const double ch = f.h / static_cast<double>(nb);

    std::string out;
    out.reserve(1 << 14);
    append_tag(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    append_tag(out, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) +
                        "\" height=\"" + fmt(height) + "\" viewBox=\"0 0 " +
                        fmt(width) + " " + fmt(height) + "\">");

    for (std::size_t ai = 0; ai < na; ++ai) {
        for (std::size_t bi = 0; bi < nb; ++bi) {
            const SweepCell& c = result.at(ai, bi);
            const std::string color = c.error.empty()
                                          ? heat_color((c.d_f - vmin) / span)
                                          : std::string(kColorError);
            const double x = f.x0 + static_cast<double>(ai) * cw;
            const double y = f.y0 + f.h - static_cast<double>(bi + 1) * ch;
            append_tag(out, "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) +
                                "\" width=\"" + fmt(cw) + "\" height=\"" + fmt(ch) +
                                "\" fill=\"" + color + "\"/>");
        }
    }
    draw_axes_box(out, f);

    // Axis labels; thin out ticks on dense grids.
    const std::size_t astep = std::max<std::size_t>(1, na / 10);
    for (std::size_t ai = 0; ai < na; ai += astep) {
        const double x = f.x0 + (static_cast<double>(ai) + 0.5) * cw;
        append_tag(out, "<text x=\"" + fmt(x) + "\" y=\"" + fmt(f.y0 + f.h + 18) +
                            "\" font-size=\"12\" text-anchor=\"middle\">" +
                            fmt(result.alphas[ai], "%.3g") + "</text>");
    }
    const std::size_t bstep = std::max<std::size_t>(1, nb / 10);
    for (std::size_t bi = 0; bi < nb; bi += bstep) {
        const double y = f.y0 + f.h - (static_cast<double>(bi) + 0.5) * ch;
        append_tag(out, "<text x=\"" + fmt(f.x0 - 8) + "\" y=\"" + fmt(y + 4) +
                            "\" font-size=\"12\" text-anchor=\"end\">" +
                            fmt(result.betas[bi], "%.3g") + "</text>");
    }
    append_tag(out, "<text x=\"" + fmt(f.x0 + f.w / 2) + "\" y=\"" +
                        fmt(f.y0 + f.h + 40) +
                        "\" font-size=\"14\" text-anchor=\"middle\">alpha</text>");
    append_tag(out, "<text x=\"18\" y=\"" + fmt(f.y0 + f.h / 2) +
                        "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
                        fmt(f.y0 + f.h / 2) + ")\">beta</text>");

    // Color scale: 64 bands with min/mid/max labels.
    const double lx = f.x0 + f.w + 30.0, lw = 22.0;
    const int bands = 64;
    const double bh = f.h / bands;
    for (int k = 0; k < bands; ++k) {
        const double t = (static_cast<double>(k) + 0.5) / bands;
        const double y = f.y0 + f.h - (k + 1) * bh;
        append_tag(out, "<rect x=\"" + fmt(lx) + "\" y=\"" + fmt(y) + "\" width=\"" +
                            fmt(lw) + "\" height=\"" + fmt(bh + 0.5) + "\" fill=\"" +
                            heat_color(t) + "\"/>");
    }
    append_tag(out, "<rect x=\"" + fmt(lx) + "\" y=\"" + fmt(f.y0) + "\" width=\"" +
                        fmt(lw) + "\" height=\"" + fmt(f.h) +
                        "\" fill=\"none\" stroke=\"black\"/>");
    const double labels[3] = {vmin, vmin + span / 2.0, vmax};
    for (int k = 0; k < 3; ++k) {
        const double y = f.y0 + f.h - (f.h / 2.0) * k;
        append_tag(out, "<text x=\"" + fmt(lx + lw + 6) + "\" y=\"" + fmt(y + 4) +
                            "\" font-size=\"12\">" + fmt(labels[k], "%.3g") +
                            "</text>");
    }

    append_tag(out, "</svg>");
    return out;
}

}  // namespace esnf
