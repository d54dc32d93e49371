#include "shom/field_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "shom/errors.hpp"

namespace shom {
namespace {

static_assert(std::endian::native == std::endian::little,
              "binary dumps assume a little-endian host");

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error("read_dump: truncated file");
  return v;
}

std::ofstream open_for_write(const std::string& path, std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw Error("cannot open " + path + " for writing");
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_dump(const std::string& path, const std::vector<std::uint32_t>& shape,
                const std::vector<double>& data) {
  std::size_t total = 1;
  for (auto s : shape) total *= s;
  if (total != data.size()) throw InvalidArgument("write_dump: shape does not match data");
  auto out = open_for_write(path, std::ios::binary | std::ios::trunc);
  out.write("SHOM", 4);
  put<std::uint32_t>(out, kDumpVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(shape.size()));
  for (auto s : shape) put<std::uint32_t>(out, s);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
  if (!out) throw Error("write_dump: write failed for " + path);
}

void write_dump(const std::string& path, const SlowField& f) {
  const auto n = static_cast<std::uint32_t>(f.grid().n());
  std::vector<std::uint32_t> shape =
      f.grid().dim() == 1 ? std::vector<std::uint32_t>{n} : std::vector<std::uint32_t>{n, n};
  write_dump(path, shape, f.values());
}

FieldDump read_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "SHOM", 4) != 0) throw Error("read_dump: bad magic in " + path);
  const auto version = get<std::uint32_t>(in);
  if (version != kDumpVersion) throw Error("read_dump: unsupported version");
  const auto dim = get<std::uint32_t>(in);
  if (dim == 0 || dim > 8) throw Error("read_dump: implausible dimension");
  FieldDump d;
  std::size_t total = 1;
  for (std::uint32_t a = 0; a < dim; ++a) {
    d.shape.push_back(get<std::uint32_t>(in));
    total *= d.shape.back();
  }
  d.data.resize(total);
  in.read(reinterpret_cast<char*>(d.data.data()),
          static_cast<std::streamsize>(total * sizeof(double)));
  if (!in) throw Error("read_dump: truncated payload");
  return d;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  auto out = open_for_write(path, std::ios::trunc);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
  if (!out) throw Error("write_csv: write failed for " + path);
}

void write_fields_csv(const std::string& path, const std::vector<std::string>& names,
                      const std::vector<const SlowField*>& fields) {
  if (fields.empty() || names.size() != fields.size())
    throw InvalidArgument("write_fields_csv: need one name per field");
  const SlowGrid& g = fields[0]->grid();
  for (const auto* f : fields) require_same_grid(*fields[0], *f, "write_fields_csv");
  std::vector<std::string> header{"x"};
  if (g.dim() == 2) header.push_back("y");
  header.insert(header.end(), names.begin(), names.end());
  std::vector<std::vector<double>> rows(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) {
    const Vec2 x = g.point(p);
    rows[p].push_back(x[0]);
    if (g.dim() == 2) rows[p].push_back(x[1]);
    for (const auto* f : fields) rows[p].push_back((*f)[p]);
  }
  write_csv(path, header, rows);
}

}  // namespace shom
