#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <sstream>

#include "bayesr/cli.hpp"
#include "bayesr/metrics.hpp"

namespace bayesr::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double to_number(const std::string& s, const std::string& flag) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) {
    throw UsageError(flag + ": '" + s + "' is not a number");
  }
  return v;
}

}  // namespace

KernelChoice parse_kernel(const std::string& text, int scale) {
  if (text == "bicubic") return KernelSpec{BicubicKernel{scale}};
  if (text == "delta") return KernelSpec{DeltaKernel{}};
  if (text.rfind("file:", 0) == 0) {
    const std::string path = text.substr(5);
    if (path.empty()) throw UsageError("--kernel file: needs a path");
    return KernelFile{path};
  }
  if (text.rfind("gauss:", 0) == 0) {
    const std::vector<std::string> p = split(text.substr(6), ',');
    if (p.size() != 4) {
      throw UsageError("--kernel gauss:SIZE,S1,S2,THETA expects 4 values");
    }
    const double size = to_number(p[0], "--kernel");
    GaussianKernel g;
    g.size = static_cast<int>(size);
    if (g.size != size || g.size <= 0 || g.size % 2 == 0) {
      throw UsageError("--kernel gauss: SIZE must be an odd positive integer");
    }
    g.sigma1 = to_number(p[1], "--kernel");
    g.sigma2 = to_number(p[2], "--kernel");
    g.theta = to_number(p[3], "--kernel");
    if (!(g.sigma1 > 0.0) || !(g.sigma2 > 0.0)) {
      throw UsageError("--kernel gauss: sigmas must be positive");
    }
    return KernelSpec{g};
  }
  throw UsageError("--kernel: expected bicubic, delta, gauss:... or file:..., "
                   "got '" + text + "'");
}

BlurKernel resolve_kernel(const KernelChoice& choice) {
  if (const auto* f = std::get_if<KernelFile>(&choice)) {
    return read_kernel_file(f->path);
  }
  return make_kernel(std::get<KernelSpec>(choice));
}

NoiseSpec parse_noise(const std::string& text) {
  NoiseSpec spec;
  if (text.rfind("awgn:", 0) == 0) {
    spec.kind = NoiseSpec::Kind::kAwgn;
    spec.first = to_number(text.substr(5), "--noise");
    if (!(spec.first >= 0.0)) throw UsageError("--noise awgn: SIGMA < 0");
    return spec;
  }
  if (text.rfind("shot:", 0) == 0) {
    const std::vector<std::string> p = split(text.substr(5), ',');
    if (p.size() != 2) {
      throw UsageError("--noise shot:SIGMA_R,SIGMA_S expects 2 values");
    }
    spec.kind = NoiseSpec::Kind::kShot;
    spec.first = to_number(p[0], "--noise");
    spec.second = to_number(p[1], "--noise");
    if (!(spec.first >= 0.0) || !(spec.second >= 0.0)) {
      throw UsageError("--noise shot: parameters must be >= 0");
    }
    return spec;
  }
  throw UsageError("--noise: expected awgn:SIGMA or shot:SIGMA_R,SIGMA_S, "
                   "got '" + text + "'");
}

std::vector<UpdateStep> parse_order(const std::string& text) {
  std::vector<UpdateStep> order;
  for (const std::string& name : split(text, ',')) {
    try {
      order.push_back(parse_update_step(name));
    } catch (const InvalidInput& e) {
      throw UsageError(std::string("--order: ") + e.what());
    }
  }
  if (order.empty()) throw UsageError("--order: empty");
  return order;
}

std::string format_value(double v) {
  if (std::isinf(v) && v > 0.0) v = kPsnrCap;
  std::ostringstream out;
  out << std::setprecision(10) << v;
  return out.str();
}

}  // namespace bayesr::cli
