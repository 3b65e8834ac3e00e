#include "dpp/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

namespace dpp {

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), ptr);
}

std::uint64_t fnv1a_hash(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

void CsvWriter::comment(const std::string& text) { os_ << "# " << text << "\n"; }

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os_ << ",";
        const std::string& c = cells[i];
        if (c.find_first_of(",\"\n") != std::string::npos) {
            os_ << '"';
            for (char ch : c) {
                if (ch == '"') os_ << '"';
                os_ << ch;
            }
            os_ << '"';
        } else {
            os_ << c;
        }
    }
    os_ << "\n";
}

namespace {

struct Ticks {
    std::vector<double> values;
};

Ticks make_ticks(double lo, double hi, int count) {
    Ticks t;
    for (int i = 0; i < count; ++i)
        t.values.push_back(lo + (hi - lo) * double(i) / double(count - 1));
    return t;
}

std::string fmt_tick(double v) {
    // Fixed 4-significant-digit tick labels keep the axis readable.
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return std::string(buf);
}

} // namespace

void write_svg_curve(std::ostream& os, const std::vector<std::array<double, 2>>& points,
                     const SvgOptions& opt) {
    const int W = opt.width, H = opt.height;
    const int ml = 56, mr = 16, mt = opt.title.empty() ? 16 : 32, mb = 40;

    double xlo = 0.0, xhi = 1.0, ylo = 0.0, yhi = 1.0;
    if (!points.empty()) {
        xlo = xhi = points[0][0];
        ylo = yhi = points[0][1];
        for (const auto& p : points) {
            xlo = std::min(xlo, p[0]);
            xhi = std::max(xhi, p[0]);
            ylo = std::min(ylo, p[1]);
            yhi = std::max(yhi, p[1]);
        }
    }
    if (xhi - xlo < 1e-300) xhi = xlo + 1.0;
    if (yhi - ylo < 1e-300) yhi = ylo + 1.0;
    const double ypad = 0.05 * (yhi - ylo);
    ylo -= ypad;
    yhi += ypad;

    auto px = [&](double x) { return ml + (x - xlo) / (xhi - xlo) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - ylo) / (yhi - ylo) * (H - mt - mb); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
       << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H
       << "\" fill=\"white\"/>\n";
    if (!opt.title.empty())
        os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\" "
              "font-family=\"sans-serif\">"
           << opt.title << "</text>\n";

    // Axes.
    os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
       << H - mb << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
       << "\" stroke=\"black\"/>\n";

    for (double xv : make_ticks(xlo, xhi, 5).values) {
        const double X = px(xv);
        os << "<line x1=\"" << format_double(X) << "\" y1=\"" << H - mb << "\" x2=\""
           << format_double(X) << "\" y2=\"" << H - mb + 5 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << format_double(X) << "\" y=\"" << H - mb + 18
           << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
           << fmt_tick(xv) << "</text>\n";
    }
    for (double yv : make_ticks(ylo, yhi, 5).values) {
        const double Y = py(yv);
        os << "<line x1=\"" << ml - 5 << "\" y1=\"" << format_double(Y) << "\" x2=\"" << ml
           << "\" y2=\"" << format_double(Y) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << ml - 8 << "\" y=\"" << format_double(Y + 4)
           << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
           << fmt_tick(yv) << "</text>\n";
    }

    os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i) {
            if (opt.step_mode)
                os << " " << format_double(px(points[i][0])) << ","
                   << format_double(py(points[i - 1][1]));
            os << " ";
        }
        os << format_double(px(points[i][0])) << "," << format_double(py(points[i][1]));
    }
    os << "\"/>\n";
    os << "</svg>\n";
}

} // namespace dpp
