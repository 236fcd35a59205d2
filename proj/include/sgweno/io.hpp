#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgweno/grid.hpp"

namespace sgweno {

// Snapshot dump: 64-byte header (magic "SGW5", version, rank, per-dimension
// extents and spacings) followed by the flat little-endian float64 payload in
// row-major order.
struct FieldDumpHeader {
  char magic[4];
  std::uint32_t version;
  std::uint32_t dim;
  std::uint32_t extents[4];
  std::uint32_t reserved;  // pads the doubles to an 8-byte offset
  double spacing[4];
};
static_assert(sizeof(FieldDumpHeader) == 64, "dump header must be 64 bytes");

struct FieldDump {
  int dim = 0;
  std::vector<int> extents;
  std::vector<double> spacing;
  std::vector<double> values;
};

inline void write_field_dump(const std::string& path, const GridField& f) {
  FieldDumpHeader h{};
  h.magic[0] = 'S';
  h.magic[1] = 'G';
  h.magic[2] = 'W';
  h.magic[3] = '5';
  h.version = 1;
  h.dim = static_cast<std::uint32_t>(f.geom.dim());
  for (int k = 0; k < f.geom.dim(); ++k) {
    h.extents[k] = static_cast<std::uint32_t>(f.geom.points[k]);
    h.spacing[k] = f.geom.spacing[k];
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_field_dump: cannot open " + path);
  out.write(reinterpret_cast<const char*>(&h), sizeof(h));
  out.write(reinterpret_cast<const char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write_field_dump: write failed for " + path);
}

inline FieldDump read_field_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_field_dump: cannot open " + path);
  FieldDumpHeader h{};
  in.read(reinterpret_cast<char*>(&h), sizeof(h));
  if (!in || std::memcmp(h.magic, "SGW5", 4) != 0 || h.version != 1)
    throw std::runtime_error("read_field_dump: bad header in " + path);
  if (h.dim < 1 || h.dim > 4) throw std::runtime_error("read_field_dump: bad rank");
  FieldDump d;
  d.dim = static_cast<int>(h.dim);
  std::size_t n = 1;
  for (int k = 0; k < d.dim; ++k) {
    d.extents.push_back(static_cast<int>(h.extents[k]));
    d.spacing.push_back(h.spacing[k]);
    n *= h.extents[k];
  }
  d.values.resize(n);
  in.read(reinterpret_cast<char*>(d.values.data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw std::runtime_error("read_field_dump: truncated payload in " + path);
  return d;
}

}  // namespace sgweno
