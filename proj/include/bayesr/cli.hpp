#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "bayesr/degradation.hpp"
#include "bayesr/error.hpp"
#include "bayesr/vb_solver.hpp"

namespace bayesr::cli {

// Malformed flag values; reported with exit code 1 like parser errors.
class UsageError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

// bicubic | delta | gauss:SIZE,S1,S2,THETA | file:PATH (THETA in radians).
struct KernelFile {
  std::filesystem::path path;
};
using KernelChoice = std::variant<KernelSpec, KernelFile>;
KernelChoice parse_kernel(const std::string& text, int scale);
BlurKernel resolve_kernel(const KernelChoice& choice);

// awgn:SIGMA | shot:SIGMA_R,SIGMA_S, parameters on the 0-255 scale.
struct NoiseSpec {
  enum class Kind { kAwgn, kShot };
  Kind kind = Kind::kAwgn;
  double first = 0.0;
  double second = 0.0;
};
NoiseSpec parse_noise(const std::string& text);

// Comma-separated update names, e.g. "m,z,x,ups,om,rho".
std::vector<UpdateStep> parse_order(const std::string& text);

// Formats a metric value for the name<TAB>value output; infinite PSNR is
// printed as the 99.99 cap.
std::string format_value(double v);

// args excludes the program name. Results go to `out`, diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace bayesr::cli
