#ifndef FLOQMON_DATASET_HPP
#define FLOQMON_DATASET_HPP

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "floqmon/util.hpp"

namespace floqmon {

// N_r x M binary outcome matrix, row = one realization's chronological
// measurement record, 1 = up, 0 = down.
struct Dataset {
    std::size_t n_realizations = 0;
    std::size_t n_measurements = 0;
    std::vector<std::uint8_t> entries;  // row-major

    Dataset() = default;
    Dataset(std::size_t n_r, std::size_t m)
        : n_realizations(n_r), n_measurements(m), entries(n_r * m, 0) {}

    std::uint8_t at(std::size_t r, std::size_t c) const {
        return entries[r * n_measurements + c];
    }
    std::uint8_t& at(std::size_t r, std::size_t c) {
        return entries[r * n_measurements + c];
    }
};

namespace detail {
inline constexpr char kDatasetMagic[8] = {'F', 'M', 'D', 'S', 'E', 'T', '0', '1'};
inline constexpr char kDatasetNote[16] = "1=up,0=down";
}  // namespace detail

// Binary layout: 8-byte magic, u32 version, 16-byte mapping note,
// u64 N_r, u64 M, then bit-packed rows (LSB-first, ceil(M/8) bytes each).
inline void write_dataset(const std::filesystem::path& path, const Dataset& d) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for write: " + path.string());
    f.write(detail::kDatasetMagic, 8);
    std::uint32_t version = 1;
    f.write(reinterpret_cast<const char*>(&version), 4);
    f.write(detail::kDatasetNote, 16);
    std::uint64_t nr = d.n_realizations, m = d.n_measurements;
    f.write(reinterpret_cast<const char*>(&nr), 8);
    f.write(reinterpret_cast<const char*>(&m), 8);
    const std::size_t row_bytes = (d.n_measurements + 7) / 8;
    std::vector<std::uint8_t> row(row_bytes);
    for (std::size_t r = 0; r < d.n_realizations; ++r) {
        std::fill(row.begin(), row.end(), 0);
        for (std::size_t c = 0; c < d.n_measurements; ++c)
            if (d.at(r, c)) row[c / 8] |= static_cast<std::uint8_t>(1u << (c % 8));
        f.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row_bytes));
    }
    if (!f) throw IoError("write failed: " + path.string());
}

inline Dataset read_dataset(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open dataset: " + path.string());
    char magic[8];
    f.read(magic, 8);
    if (!f || std::memcmp(magic, detail::kDatasetMagic, 8) != 0)
        throw IoError("bad dataset magic: " + path.string());
    std::uint32_t version = 0;
    f.read(reinterpret_cast<char*>(&version), 4);
    if (version != 1) throw IoError("unsupported dataset version: " + path.string());
    char note[16];
    f.read(note, 16);
    std::uint64_t nr = 0, m = 0;
    f.read(reinterpret_cast<char*>(&nr), 8);
    f.read(reinterpret_cast<char*>(&m), 8);
    if (!f) throw IoError("truncated dataset header: " + path.string());
    Dataset d(nr, m);
    const std::size_t row_bytes = (d.n_measurements + 7) / 8;
    std::vector<std::uint8_t> row(row_bytes);
    for (std::size_t r = 0; r < d.n_realizations; ++r) {
        f.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row_bytes));
        if (!f) throw IoError("truncated dataset rows: " + path.string());
        for (std::size_t c = 0; c < d.n_measurements; ++c)
            d.at(r, c) = (row[c / 8] >> (c % 8)) & 1;
    }
    return d;
}

// CSV mirror: header row m0..m{M-1}, one realization per line.
inline void write_dataset_csv(const std::filesystem::path& path, const Dataset& d) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for write: " + path.string());
    for (std::size_t c = 0; c < d.n_measurements; ++c)
        f << (c ? "," : "") << "m" << c;
    f << "\n";
    for (std::size_t r = 0; r < d.n_realizations; ++r) {
        for (std::size_t c = 0; c < d.n_measurements; ++c)
            f << (c ? "," : "") << int(d.at(r, c));
        f << "\n";
    }
    if (!f) throw IoError("write failed: " + path.string());
}

}  // namespace floqmon

#endif
