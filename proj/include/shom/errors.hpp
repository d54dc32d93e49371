#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace shom {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A Fourier symbol or spectral precondition failed (non-finite symbol,
/// nonzero mean where a zero-mean field is required, ...).
class SpectralError : public Error {
 public:
  using Error::Error;
};

/// Raised by parse_config; carries the 1-based line number (0 when the
/// violation is not tied to a line).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Water depth fell below its admissible floor.
class DepthError : public Error {
 public:
  DepthError(const std::string& what, double x, double time, double depth)
      : Error(what), x_(x), time_(time), depth_(depth) {}
  double x() const noexcept { return x_; }
  double time() const noexcept { return time_; }
  double depth() const noexcept { return depth_; }

 private:
  double x_;
  double time_;
  double depth_;
};

/// Time step exceeds the CFL bound.
class CflError : public Error {
 public:
  CflError(const std::string& what, double dt, double dt_max)
      : Error(what), dt_(dt), dt_max_(dt_max) {}
  double dt() const noexcept { return dt_; }
  double dt_max() const noexcept { return dt_max_; }

 private:
  double dt_;
  double dt_max_;
};

/// One bottom mode that fails the nonresonance test.
struct ResonantMode {
  std::array<int, 2> k{0, 0};
  double margin = 0.0;     // omega_k^2 - (k.V0)^2
  double threshold = 0.0;  // 1 / B_k
};

class ResonanceError : public Error {
 public:
  ResonanceError(const std::string& what, std::vector<ResonantMode> modes,
                 std::optional<std::size_t> slow_index = std::nullopt,
                 std::optional<double> x = std::nullopt)
      : Error(what), modes_(std::move(modes)), slow_index_(slow_index), x_(x) {}
  const std::vector<ResonantMode>& modes() const noexcept { return modes_; }
  std::optional<std::size_t> slow_index() const noexcept { return slow_index_; }
  std::optional<double> x() const noexcept { return x_; }

 private:
  std::vector<ResonantMode> modes_;
  std::optional<std::size_t> slow_index_;
  std::optional<double> x_;
};

/// Linear solver failure in the elliptic oracle or the cell-problem oracle.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, long iterations, double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}
  long iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  long iterations_;
  double residual_;
};

/// The fast period 2*pi*gamma does not divide the slow box.
class CommensurabilityError : public Error {
 public:
  CommensurabilityError(const std::string& what, double suggested_gamma)
      : Error(what), suggested_gamma_(suggested_gamma) {}
  double suggested_gamma() const noexcept { return suggested_gamma_; }

 private:
  double suggested_gamma_;
};

}  // namespace shom
