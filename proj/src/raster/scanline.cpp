#include "scanline.hpp"

#include <algorithm>
#include <cmath>

namespace svgkit::raster::detail {

namespace {

struct Edge {
    double x0, y0, x1, y1;
    int dir;
    // First and one-past-last sub-scanline rows this edge crosses.
    long first, last;
};

struct Crossing {
    double x;
    int dir;
};

// Per-pixel sample positions: a uniform n-point grid squeezed a little toward
// the pixel centre. The grid is still symmetric under mirroring, quarter
// turns and whole-pixel shifts, but no longer sits on short decimal fractions,
// so edges between decimal coordinates do not pass exactly through samples
// (where rounding noise would decide coverage).
class SampleGrid {
public:
    explicit SampleGrid(int n) : n_(n), h_((1.0 - kSqueeze) / n), c_(0.5 - (n - 1) * 0.5 * h_) {}

    double position(long i) const {
        const long p = i >= 0 ? i / n_ : -((-i + n_ - 1) / n_);
        return static_cast<double>(p) + c_ + static_cast<double>(i - p * n_) * h_;
    }

    // Index of the first sample at or after v.
    long first_from(double v) const {
        const double p = std::floor(v);
        const double k = std::clamp(std::ceil((v - p - c_) / h_), 0.0, static_cast<double>(n_));
        return static_cast<long>(p) * n_ + static_cast<long>(k);
    }

private:
    static constexpr double kSqueeze = 0.0141421356237;
    int n_;
    double h_;
    double c_;
};

} // namespace

CoverageMask rasterize_polygons(const std::vector<Polygon>& polygons, FillRule rule, int width,
                                int height, int samples) {
    CoverageMask mask;
    mask.full = samples * samples;
    const SampleGrid grid(samples);
    std::vector<Edge> edges;
    Box box;
    for (const auto& poly : polygons) {
        const std::size_t count = poly.size();
        if (count < 3) continue;
        for (std::size_t i = 0; i < count; ++i) {
            Point a = poly[i], b = poly[(i + 1) % count];
            if (!std::isfinite(a.x) || !std::isfinite(a.y) || !std::isfinite(b.x) || !std::isfinite(b.y)) {
                continue;
            }
            if (a.y == b.y) continue;
            int dir = 1;
            if (a.y > b.y) {
                std::swap(a, b);
                dir = -1;
            }
            // the edge covers sample rows in [a.y, b.y)
            const long first = grid.first_from(a.y);
            const long last = grid.first_from(b.y);
            if (first >= last) continue;
            edges.push_back({a.x, a.y, b.x, b.y, dir, first, last});
            box.extend(a);
            box.extend(b);
        }
    }
    if (edges.empty() || box.empty()) return mask;

    const long row_lo = std::max<long>(0, static_cast<long>(std::floor(box.y0)));
    const long row_hi = std::min<long>(height, static_cast<long>(std::ceil(box.y1)) + 1);
    const long col_lo = std::max<long>(0, static_cast<long>(std::floor(box.x0)));
    const long col_hi = std::min<long>(width, static_cast<long>(std::ceil(box.x1)) + 1);
    if (row_lo >= row_hi || col_lo >= col_hi) return mask;

    mask.x0 = static_cast<int>(col_lo);
    mask.y0 = static_cast<int>(row_lo);
    mask.w = static_cast<int>(col_hi - col_lo);
    mask.h = static_cast<int>(row_hi - row_lo);
    mask.counts.assign(static_cast<std::size_t>(mask.w) * mask.h, 0);

    std::sort(edges.begin(), edges.end(), [](const Edge& l, const Edge& r) { return l.first < r.first; });

    const long sub_lo = row_lo * samples;
    const long sub_hi = row_hi * samples;
    const long sample_col_lo = col_lo * samples;
    const long sample_col_hi = col_hi * samples;
    std::vector<const Edge*> active;
    std::vector<Crossing> crossings;
    // Edges that begin above the visible window but reach into it.
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].first < sub_lo && edges[i].last > sub_lo) active.push_back(&edges[i]);
    }
    std::size_t next = 0;
    while (next < edges.size() && edges[next].first < sub_lo) ++next;

    for (long sub = sub_lo; sub < sub_hi; ++sub) {
        while (next < edges.size() && edges[next].first <= sub) {
            active.push_back(&edges[next]);
            ++next;
        }
        active.erase(std::remove_if(active.begin(), active.end(),
                                    [sub](const Edge* e) { return e->last <= sub; }),
                     active.end());
        if (active.empty()) {
            if (next >= edges.size()) break;
            continue;
        }
        const double y = grid.position(sub);
        crossings.clear();
        for (const Edge* e : active) {
            const double x = e->x0 + (y - e->y0) * (e->x1 - e->x0) / (e->y1 - e->y0);
            crossings.push_back({x, e->dir});
        }
        std::sort(crossings.begin(), crossings.end(),
                  [](const Crossing& l, const Crossing& r) { return l.x < r.x; });
        std::uint16_t* row = mask.counts.data() +
                             static_cast<std::size_t>(sub / samples - row_lo) * mask.w;
        int winding = 0;
        for (std::size_t i = 0; i + 1 < crossings.size(); ++i) {
            winding += crossings[i].dir;
            const bool inside = rule == FillRule::NonZero ? winding != 0 : (winding & 1) != 0;
            if (!inside) continue;
            long c0 = grid.first_from(crossings[i].x);
            long c1 = grid.first_from(crossings[i + 1].x);
            c0 = std::max(c0, sample_col_lo);
            c1 = std::min(c1, sample_col_hi);
            if (c0 >= c1) continue;
            const long p0 = c0 / samples, p1 = (c1 - 1) / samples;
            if (p0 == p1) {
                row[p0 - col_lo] = static_cast<std::uint16_t>(row[p0 - col_lo] + (c1 - c0));
                continue;
            }
            row[p0 - col_lo] = static_cast<std::uint16_t>(row[p0 - col_lo] + (samples * (p0 + 1) - c0));
            for (long p = p0 + 1; p < p1; ++p) {
                row[p - col_lo] = static_cast<std::uint16_t>(row[p - col_lo] + samples);
            }
            row[p1 - col_lo] = static_cast<std::uint16_t>(row[p1 - col_lo] + (c1 - samples * p1));
        }
    }
    return mask;
}

} // namespace svgkit::raster::detail
