#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace heavenly {

using complex = std::complex<double>;

/// A point in a 4-coordinate frame. Slots follow the frame's slot order.
using Point4 = std::array<complex, 4>;
using RealPoint4 = std::array<double, 4>;

using Mat4c = std::array<std::array<complex, 4>, 4>;
using Mat4d = std::array<std::array<double, 4>, 4>;
using Vec4c = std::array<complex, 4>;
using Vec4d = std::array<double, 4>;

/// The four coordinate frames used throughout.
///  - KahlerOriginal : (z1, z1bar, z2, z2bar), conjugate-paired slots
///  - HcmaLegendre   : (p, pbar, z2, z2bar),   conjugate-paired slots
///  - HeavenOriginal : (x, y, z, w)
///  - HeavenLegendre : (t, r, x, z)
enum class FrameId {
  KahlerOriginal,
  HcmaLegendre,
  HeavenOriginal,
  HeavenLegendre,
  Generic,  // hand-built jets accepted by any equation
};

struct CoordinateFrame {
  FrameId id;
  std::array<const char*, 4> slot_names;
  /// Slot 1 is the conjugate of slot 0 and slot 3 of slot 2.
  bool conjugate_paired;
};

const CoordinateFrame& frame_info(FrameId id);
std::string frame_name(FrameId id);

enum class ErrorKind {
  DegenerateTerm,
  DivisionByZero,
  Incompatible,
  FrameMismatch,
  InsufficientJetOrder,
  NonPositiveLeadingEntry,
  DegenerateMetric,
  ResidualImaginaryPart,
  IllConditioned,
  Overflow,
  InvalidArgument,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what),
        kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Mat4d zero4d() {
  return Mat4d{{{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}};
}

inline Mat4c zero4c() {
  Mat4c m{};
  for (auto& row : m) row.fill(complex(0, 0));
  return m;
}

double frobenius(const Mat4d& m);
double max_abs(const Mat4d& m);
double max_abs(const Mat4c& m);

}  // namespace heavenly
