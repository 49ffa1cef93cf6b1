#include "corpus.hpp"

#include <cmath>
#include <cstdio>

#include "svgkit/core/document.hpp"
#include "svgkit/normalize/normalizer.hpp"

namespace svgkit::testing {

namespace {

const char* kPalette[] = {"#1e88e5", "#e53935", "#43a047", "#fdd835", "#8e24aa", "#212121", "#ff7043",
                          "#00acc1", "#6d4c41", "#c0ca33", "#ffffff", "#546e7a"};
const char* kNamed[] = {"red", "navy", "teal", "orange", "black", "gold"};

struct Frame {
    double x, y, w, h;
};

std::string fmt(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s = buf;
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

} // namespace

std::uint64_t IconGenerator::next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double IconGenerator::uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
}

int IconGenerator::integer(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
}

std::string IconGenerator::raw_icon() {
    static const Frame frames[] = {{0, 0, 24, 24},   {0, 0, 32, 32},   {0, 0, 48, 48},  {0, 0, 64, 64},
                                   {0, 0, 100, 100}, {0, 0, 128, 128}, {0, 0, 256, 256}, {0, 0, 512, 512},
                                   {-8, -8, 80, 80}, {0, 0, 200, 120}, {0, 0, 90, 150}};
    const Frame f = frames[next() % std::size(frames)];
    const int dec = integer(1, 3);
    auto X = [&](double u) { return fmt(f.x + u * f.w, dec); };
    auto Y = [&](double v) { return fmt(f.y + v * f.h, dec); };
    auto L = [&](double u) { return fmt(u * std::min(f.w, f.h), dec); };
    auto color = [&]() -> std::string {
        if (chance(0.15)) return kNamed[next() % std::size(kNamed)];
        return kPalette[next() % std::size(kPalette)];
    };

    std::string s;
    if (chance(0.5)) s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    if (chance(0.3)) s += "<!-- Generator: synthetic editor export -->\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\"";
    if (chance(0.4)) s += " xmlns:xlink=\"http://www.w3.org/1999/xlink\"";
    if (chance(0.3)) s += " xmlns:sodipodi=\"http://sodipodi.sourceforge.net/DTD/sodipodi-0.dtd\"";
    if (chance(0.5)) s += " version=\"1.1\"";
    if (chance(0.7)) s += " width=\"" + fmt(f.w, 0) + "px\" height=\"" + fmt(f.h, 0) + "px\"";
    s += " viewBox=\"" + fmt(f.x, 0) + " " + fmt(f.y, 0) + " " + fmt(f.w, 0) + " " + fmt(f.h, 0) + "\"";
    if (chance(0.3)) s += " xml:space=\"preserve\"";
    s += ">\n";
    if (chance(0.4)) s += "  <title>icon " + std::to_string(integer(1, 999)) + "</title>\n";
    if (chance(0.2)) s += "  <desc>Created with a vector editor</desc>\n";
    if (chance(0.2)) s += "  <metadata><rdf>none</rdf></metadata>\n";

    const bool gradient = chance(0.3);
    if (gradient || chance(0.3)) {
        s += "  <defs>\n";
        if (gradient) {
            s += "    <linearGradient id=\"grad1\" x1=\"0\" y1=\"0\" x2=\"1\" y2=\"1\">\n";
            s += "      <stop offset=\"0\" stop-color=\"" + std::string(kPalette[next() % 10]) + "\"/>\n";
            s += "      <stop offset=\"1\" stop-color=\"" + std::string(kPalette[next() % 10]) + "\"/>\n";
            s += "    </linearGradient>\n";
        }
        if (chance(0.5)) s += "    <radialGradient id=\"unused\"><stop offset=\"0\" stop-color=\"#000\"/></radialGradient>\n";
        s += "  </defs>\n";
    }

    const int shapes = integer(2, 7);
    bool group_open = false;
    for (int i = 0; i < shapes; ++i) {
        if (!group_open && chance(0.25)) {
            s += "  <g";
            if (chance(0.3)) s += " id=\"layer" + std::to_string(i) + "\"";
            const double r = uniform(0, 1);
            if (r < 0.3) s += " transform=\"translate(" + L(uniform(-0.1, 0.1)) + " " + L(uniform(-0.1, 0.1)) + ")\"";
            else if (r < 0.5) s += " transform=\"rotate(" + fmt(uniform(-30, 30), 0) + " " + X(0.5) + " " + Y(0.5) + ")\"";
            if (chance(0.3)) s += " opacity=\"" + fmt(uniform(0.4, 0.9), 2) + "\"";
            if (chance(0.3)) s += " fill=\"" + color() + "\"";
            s += ">\n";
            group_open = true;
        }
        const char* indent = group_open ? "    " : "  ";
        std::string style;
        std::string paint = gradient && chance(0.3) ? "url(#grad1)" : color();
        if (chance(0.2)) {
            style = " style=\"fill:" + paint + ";fill-opacity:1;stroke:none\"";
        } else {
            style = " fill=\"" + paint + "\"";
            if (chance(0.25)) style += " stroke=\"" + color() + "\" stroke-width=\"" + L(uniform(0.01, 0.04)) + "\"";
            if (chance(0.2)) style += " fill-rule=\"nonzero\"";
            if (chance(0.15)) style += " stroke-linecap=\"butt\"";
        }
        if (chance(0.1)) style += " sodipodi:nodetypes=\"cccc\"";

        const int kind = integer(0, 6);
        s += indent;
        switch (kind) {
        case 0: {
            const double x = uniform(0.05, 0.5), y = uniform(0.05, 0.5);
            s += "<rect x=\"" + X(x) + "\" y=\"" + Y(y) + "\" width=\"" + fmt(uniform(0.1, 0.45) * f.w, dec) +
                 "\" height=\"" + fmt(uniform(0.1, 0.45) * f.h, dec) + "\"";
            if (chance(0.4)) s += " rx=\"" + L(uniform(0.01, 0.05)) + "\"";
            break;
        }
        case 1:
            s += "<circle cx=\"" + X(uniform(0.3, 0.7)) + "\" cy=\"" + Y(uniform(0.3, 0.7)) + "\" r=\"" +
                 L(uniform(0.05, 0.25)) + "\"";
            break;
        case 2:
            s += "<ellipse cx=\"" + X(uniform(0.3, 0.7)) + "\" cy=\"" + Y(uniform(0.3, 0.7)) + "\" rx=\"" +
                 L(uniform(0.05, 0.25)) + "\" ry=\"" + L(uniform(0.05, 0.2)) + "\"";
            break;
        case 3:
            s += "<polygon points=\"";
            for (int k = 0, n = integer(3, 6); k < n; ++k) {
                s += (k ? " " : "") + X(uniform(0.05, 0.95)) + "," + Y(uniform(0.05, 0.95));
            }
            s += "\"";
            break;
        case 4: {
            s += "<path d=\"M" + X(uniform(0.1, 0.5)) + " " + Y(uniform(0.1, 0.5));
            for (int k = 0, n = integer(2, 5); k < n; ++k) {
                switch (integer(0, 5)) {
                case 0: s += "L" + X(uniform(0.05, 0.95)) + " " + Y(uniform(0.05, 0.95)); break;
                case 1: s += "l" + L(uniform(-0.2, 0.2)) + " " + L(uniform(-0.2, 0.2)); break;
                case 2: s += "H" + X(uniform(0.05, 0.95)); break;
                case 3:
                    s += "C" + X(uniform(0.05, 0.95)) + " " + Y(uniform(0.05, 0.95)) + " " + X(uniform(0.05, 0.95)) +
                         " " + Y(uniform(0.05, 0.95)) + " " + X(uniform(0.05, 0.95)) + " " + Y(uniform(0.05, 0.95));
                    break;
                case 4: s += "q" + L(uniform(-0.2, 0.2)) + "," + L(uniform(-0.2, 0.2)) + " " + L(uniform(-0.2, 0.2)) + "," + L(uniform(-0.2, 0.2)); break;
                default:
                    s += "A" + L(uniform(0.05, 0.2)) + " " + L(uniform(0.05, 0.2)) + " 0 0 1 " + X(uniform(0.1, 0.9)) +
                         " " + Y(uniform(0.1, 0.9));
                    break;
                }
            }
            s += "Z\"";
            break;
        }
        case 5:
            s += "<line x1=\"" + X(uniform(0.05, 0.95)) + "\" y1=\"" + Y(uniform(0.05, 0.95)) + "\" x2=\"" +
                 X(uniform(0.05, 0.95)) + "\" y2=\"" + Y(uniform(0.05, 0.95)) + "\"";
            style = " stroke=\"" + color() + "\" stroke-width=\"" + L(uniform(0.01, 0.05)) + "\"";
            break;
        default:
            s += "<polyline fill=\"none\" points=\"";
            for (int k = 0, n = integer(2, 5); k < n; ++k) {
                s += (k ? " " : "") + X(uniform(0.05, 0.95)) + " " + Y(uniform(0.05, 0.95));
            }
            s += "\"";
            style = " stroke=\"" + color() + "\" stroke-width=\"" + L(uniform(0.01, 0.05)) + "\" stroke-linejoin=\"round\"";
            break;
        }
        s += style;
        if (chance(0.1)) s += " opacity=\"1\"";
        s += "/>\n";
        if (group_open && (i == shapes - 1 || chance(0.3))) {
            s += "  </g>\n";
            group_open = false;
        }
    }
    s += "</svg>\n";
    return s;
}

std::string IconGenerator::canonical_icon() {
    const auto doc = normalize::pipeline(core::parse_svg(raw_icon()));
    return core::serialize_svg(doc);
}

std::string IconGenerator::simple_icon() {
    // Whole-unit geometry well inside the canvas so that translations up to
    // 16 units and quarter turns stay on it.
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 128 128\">";
    const int shapes = integer(2, 5);
    for (int i = 0; i < shapes; ++i) {
        const std::string fill = kPalette[next() % 10];
        switch (integer(0, 3)) {
        case 0:
            s += "<rect x=\"" + std::to_string(integer(20, 60)) + "\" y=\"" + std::to_string(integer(20, 60)) +
                 "\" width=\"" + std::to_string(integer(10, 45)) + "\" height=\"" + std::to_string(integer(10, 45)) +
                 "\" fill=\"" + fill + "\"/>";
            break;
        case 1:
            s += "<circle cx=\"" + fmt(uniform(40, 88), 2) + "\" cy=\"" + fmt(uniform(40, 88), 2) + "\" r=\"" +
                 fmt(uniform(5, 20), 2) + "\" fill=\"" + fill + "\"/>";
            break;
        case 2:
            s += "<path d=\"M" + fmt(uniform(20, 100), 2) + " " + fmt(uniform(20, 100), 2) + "L" +
                 fmt(uniform(20, 100), 2) + " " + fmt(uniform(20, 100), 2) + "Q" + fmt(uniform(20, 100), 2) + " " +
                 fmt(uniform(20, 100), 2) + " " + fmt(uniform(20, 100), 2) + " " + fmt(uniform(20, 100), 2) +
                 "Z\" fill=\"" + fill + "\"/>";
            break;
        default:
            s += "<ellipse cx=\"" + fmt(uniform(45, 83), 2) + "\" cy=\"" + fmt(uniform(45, 83), 2) + "\" rx=\"" +
                 fmt(uniform(5, 20), 2) + "\" ry=\"" + fmt(uniform(5, 20), 2) + "\" fill=\"" + fill +
                 "\" stroke=\"" + kPalette[next() % 10] + "\" stroke-width=\"2\"/>";
            break;
        }
    }
    return s + "</svg>";
}

std::vector<std::string> raw_corpus(std::size_t n, std::uint64_t seed) {
    IconGenerator gen(seed);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(gen.raw_icon());
    return out;
}

std::vector<std::string> canonical_corpus(std::size_t n, std::uint64_t seed) {
    IconGenerator gen(seed);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(gen.canonical_icon());
    return out;
}

} // namespace svgkit::testing
