#include "svg.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>

namespace ricci::cli {

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string histogram_svg(const Histogram& h, const std::string& title, const std::string& provenance_line) {
    const double W = 640, H = 400, left = 60, right = 20, top = 40, bottom = 50;
    const double pw = W - left - right, ph = H - top - bottom;
    long long peak = 1;
    for (long long c : h.counts) peak = std::max(peak, c);
    const int decades = std::max(1, static_cast<int>(std::ceil(std::log10(static_cast<double>(peak)) + 1e-12)));
    auto ypos = [&](double count) { return top + ph * (1.0 - std::log10(count) / decades); };

    std::string s;
    s += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n", W,
                     H, W, H);
    // Provenance as an XML comment; "--" is not allowed inside one.
    std::string prov = provenance_line;
    for (std::size_t p; (p = prov.find("--")) != std::string::npos;) prov.replace(p, 2, "- -");
    s += "<!-- " + prov + " -->\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += fmt::format("<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
                     W / 2, escape(title));

    const double bw = pw / static_cast<double>(h.counts.size());
    for (std::size_t k = 0; k < h.counts.size(); ++k) {
        if (h.counts[k] == 0) continue;
        // A count of 1 sits at log10(1) = 0; give it a visible sliver.
        const double y = std::min(ypos(static_cast<double>(h.counts[k])), top + ph - 2.0);
        s += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#4a7ab5\" "
                         "stroke=\"#1f3d63\"><title>{}</title></rect>\n",
                         left + k * bw, y, bw, top + ph - y, h.counts[k]);
    }

    s += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", left, top + ph, left + pw, top + ph);
    s += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", left, top, left, top + ph);
    for (int d = 0; d <= decades; ++d) {
        const double y = ypos(std::pow(10.0, d));
        s += fmt::format("<line x1=\"{}\" y1=\"{:.2f}\" x2=\"{}\" y2=\"{:.2f}\" stroke=\"black\"/>\n", left - 4, y, left, y);
        s += fmt::format("<text x=\"{}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">1e{}</text>\n",
                         left - 6, y + 4, d);
    }
    const int ticks = 4;
    for (int t = 0; t <= ticks; ++t) {
        const double v = h.lo + (h.hi - h.lo) * t / ticks;
        const double x = left + pw * t / ticks;
        s += fmt::format("<line x1=\"{:.2f}\" y1=\"{}\" x2=\"{:.2f}\" y2=\"{}\" stroke=\"black\"/>\n", x, top + ph, x, top + ph + 4);
        s += fmt::format("<text x=\"{:.2f}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{:g}</text>\n",
                         x, top + ph + 18, v);
    }
    s += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">kappa_G</text>\n",
                     left + pw / 2, H - 12);
    s += "</svg>\n";
    return s;
}

}  // namespace ricci::cli
