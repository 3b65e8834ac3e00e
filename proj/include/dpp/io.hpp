#pragma once

/// Deterministic report emission: RFC-4180-style CSV with a '#' metadata
/// comment line, a minimal hand-rolled SVG polyline writer, shortest
/// round-trip float formatting, and config hashing. Identical inputs produce
/// byte-identical output.

#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace dpp {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

std::uint64_t fnv1a_hash(const std::string& bytes);
std::string hash_hex(std::uint64_t h);

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}
    void comment(const std::string& text);
    void row(const std::vector<std::string>& cells);

private:
    std::ostream& os_;
};

struct SvgOptions {
    int width = 640;
    int height = 480;
    bool step_mode = false; // staircase rendering for discontinuous curves
    std::string title;
};

/// Axis-annotated polyline of (x, y) samples.
void write_svg_curve(std::ostream& os, const std::vector<std::array<double, 2>>& points,
                     const SvgOptions& options);

} // namespace dpp
