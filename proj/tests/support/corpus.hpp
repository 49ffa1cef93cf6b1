#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace svgkit::testing {

/// Deterministic generator of icon-like SVG files in the style of editor
/// exports: arbitrary viewBoxes, width/height, comments, metadata, namespaced
/// editor attributes, default-valued attributes and unused definitions.
class IconGenerator {
public:
    explicit IconGenerator(std::uint64_t seed) : state_(seed) {}

    std::string raw_icon();

    /// Canonical forms: raw_icon() pushed through the normalization pipeline.
    std::string canonical_icon();

    /// A canonical icon whose content stays inside the canvas, every color
    /// solid and opaque (used by the edit oracles).
    std::string simple_icon();

    std::uint64_t next();
    double uniform(double lo, double hi);
    int integer(int lo, int hi);  // inclusive
    bool chance(double p) { return uniform(0, 1) < p; }

private:
    std::uint64_t state_;
};

std::vector<std::string> raw_corpus(std::size_t n, std::uint64_t seed);
std::vector<std::string> canonical_corpus(std::size_t n, std::uint64_t seed);

} // namespace svgkit::testing
