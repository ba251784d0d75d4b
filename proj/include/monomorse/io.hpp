#pragma once

// Raw float64 arrays with a JSON manifest, PGM (P5) images, CSV tables.

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "monomorse/errors.hpp"
#include "monomorse/estimators.hpp"
#include "monomorse/grid.hpp"

namespace monomorse::io {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::Io, "io", what);
}

inline std::uint64_t byteswap64(std::uint64_t v) {
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return out;
}

inline bool host_little() { return std::endian::native == std::endian::little; }

}  // namespace detail

/// Writes values as little-endian float64.
inline void write_raw(const fs::path& path, const std::vector<double>& values) {
    std::ofstream out(path, std::ios::binary);
    detail::require(out.good(), "cannot open " + path.string() + " for writing");
    for (double v : values) {
        std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
        if (!detail::host_little()) bits = detail::byteswap64(bits);
        out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
    detail::require(out.good(), "write failed for " + path.string());
}

inline std::vector<double> read_raw(const fs::path& path, std::size_t count, bool little_endian = true) {
    std::ifstream in(path, std::ios::binary);
    detail::require(in.good(), "cannot open " + path.string());
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::uint64_t bits = 0;
        in.read(reinterpret_cast<char*>(&bits), sizeof bits);
        detail::require(in.good(), "raw file " + path.string() + " is shorter than its manifest says");
        if (little_endian != detail::host_little()) bits = detail::byteswap64(bits);
        values[i] = std::bit_cast<double>(bits);
    }
    return values;
}

inline void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    detail::require(out.good(), "cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
    detail::require(out.good(), "write failed for " + path.string());
}

inline json read_json(const fs::path& path) {
    std::ifstream in(path);
    detail::require(in.good(), "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Io, "io", path.string() + ": " + e.what());
    }
}

/// Image manifest {n1, n2, d1, d2, byte_order, dtype, data_file}; the data file sits next to it.
inline json image_manifest(const ImageGrid& image, const std::string& data_file) {
    return {{"n1", image.n1},           {"n2", image.n2},     {"d1", image.d1},
            {"d2", image.d2},           {"byte_order", "little"}, {"dtype", "float64"},
            {"data_file", data_file},   {"layout", "row-major, x1 fastest"}};
}

/// Writes <stem>.json and <stem>.f64.
inline void write_image(const fs::path& manifest_path, const ImageGrid& image, json extra = json::object()) {
    const fs::path data = fs::path(manifest_path).replace_extension(".f64");
    write_raw(data, image.data);
    json m = image_manifest(image, data.filename().string());
    for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
    write_json(manifest_path, m);
}

inline ImageGrid read_image_manifest(const fs::path& manifest_path) {
    const json m = read_json(manifest_path);
    ImageGrid image;
    try {
        image.n1 = m.at("n1").get<std::size_t>();
        image.n2 = m.at("n2").get<std::size_t>();
        image.d1 = m.value("d1", 1.0);
        image.d2 = m.value("d2", 1.0);
        const std::string order = m.value("byte_order", "little");
        detail::require(order == "little" || order == "big", "byte_order must be little or big");
        detail::require(m.value("dtype", "float64") == "float64", "only float64 data is supported");
        const fs::path data = manifest_path.parent_path() / m.at("data_file").get<std::string>();
        image.data = read_raw(data, image.n1 * image.n2, order == "little");
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Io, "io", manifest_path.string() + ": " + e.what());
    }
    return image;
}

// ---------------------------------------------------------------------------
// PGM
// ---------------------------------------------------------------------------

namespace detail {

inline std::string pgm_token(std::istream& in) {
    std::string tok;
    char c = 0;
    while (in.get(c)) {
        if (c == '#') {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(c);
    }
    return tok;
}

}  // namespace detail

/// Reads an 8- or 16-bit binary PGM into float64 (raw sample values, unit spacing).
inline ImageGrid read_pgm(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    detail::require(in.good(), "cannot open " + path.string());
    detail::require(detail::pgm_token(in) == "P5", path.string() + " is not a binary PGM");
    std::size_t w = 0;
    std::size_t h = 0;
    long maxval = 0;
    try {
        w = std::stoul(detail::pgm_token(in));
        h = std::stoul(detail::pgm_token(in));
        maxval = std::stol(detail::pgm_token(in));
    } catch (const std::exception&) {
        throw Error(ErrorKind::Io, "io", path.string() + ": malformed PGM header");
    }
    detail::require(maxval > 0 && maxval < 65536, path.string() + ": PGM maxval out of range");
    ImageGrid image(w, h);
    const bool wide = maxval > 255;
    for (std::size_t i = 0; i < w * h; ++i) {
        unsigned char b[2] = {0, 0};
        in.read(reinterpret_cast<char*>(b), wide ? 2 : 1);
        detail::require(in.good(), path.string() + ": truncated PGM data");
        image.data[i] = wide ? static_cast<double>((b[0] << 8) | b[1]) : static_cast<double>(b[0]);
    }
    return image;
}

/// Writes a linearly scaled PGM (min -> 0, max -> maxval) for inspection.
inline void write_pgm(const fs::path& path, const std::vector<double>& values, std::size_t n1, std::size_t n2,
                      bool sixteen_bit = true) {
    detail::require(values.size() == n1 * n2, "PGM size mismatch");
    std::ofstream out(path, std::ios::binary);
    detail::require(out.good(), "cannot open " + path.string() + " for writing");
    const int maxval = sixteen_bit ? 65535 : 255;
    out << "P5\n" << n1 << ' ' << n2 << '\n' << maxval << '\n';
    double lo = 0.0;
    double hi = 0.0;
    if (!values.empty()) {
        const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
        lo = *mn;
        hi = *mx;
    }
    const double span = hi > lo ? hi - lo : 1.0;
    for (double v : values) {
        const long q = std::lround((v - lo) / span * maxval);
        if (sixteen_bit) {
            const unsigned char b[2] = {static_cast<unsigned char>(q >> 8), static_cast<unsigned char>(q & 0xff)};
            out.write(reinterpret_cast<const char*>(b), 2);
        } else {
            const unsigned char b = static_cast<unsigned char>(q);
            out.write(reinterpret_cast<const char*>(&b), 1);
        }
    }
    detail::require(out.good(), "write failed for " + path.string());
}

/// Manifest (.json) or PGM (.pgm) by extension.
inline ImageGrid read_image(const fs::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".pgm" || ext == ".PGM") return read_pgm(path);
    return read_image_manifest(path);
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string csv_number(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

/// b1,b2,a,nu_rad,phase_cycles,amplitude,S_plus
inline void write_ridge_csv(const fs::path& path, const std::vector<RidgeSample>& samples) {
    std::ofstream out(path);
    detail::require(out.good(), "cannot open " + path.string() + " for writing");
    out << "b1,b2,a,nu_rad,phase_cycles,amplitude,S_plus\n";
    for (const RidgeSample& r : samples) {
        out << csv_number(r.b1) << ',' << csv_number(r.b2) << ',' << csv_number(r.a) << ','
            << (r.orientation_valid ? csv_number(r.nu) : std::string("nan")) << ',' << csv_number(r.phase) << ','
            << csv_number(r.amplitude) << ',' << csv_number(r.s_plus) << '\n';
    }
    detail::require(out.good(), "write failed for " + path.string());
}

}  // namespace monomorse::io
