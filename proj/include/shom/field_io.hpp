#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shom/slow_field.hpp"

namespace shom {

/// Raw array read back from a binary dump.
struct FieldDump {
  std::vector<std::uint32_t> shape;
  std::vector<double> data;
};

inline constexpr std::uint32_t kDumpVersion = 1;

/// "SHOM" | u32 version | u32 dim | u32 size per axis | f64 payload, all
/// little-endian. Payload order is x-fastest.
void write_dump(const std::string& path, const std::vector<std::uint32_t>& shape,
                const std::vector<double>& data);
void write_dump(const std::string& path, const SlowField& f);
FieldDump read_dump(const std::string& path);

/// One row per grid point: coordinate columns (x[, y]) then one column per
/// field. Numbers are written with %.17g so output is byte-reproducible.
void write_fields_csv(const std::string& path, const std::vector<std::string>& names,
                      const std::vector<const SlowField*>& fields);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string format_double(double v);

}  // namespace shom
