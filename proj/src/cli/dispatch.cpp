#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "bayesr/cli.hpp"
#include "bayesr/image_io.hpp"
#include "bayesr/metrics.hpp"
#include "bayesr/random.hpp"
#include "bayesr/restore.hpp"
#include "bayesr/state_io.hpp"

namespace fs = std::filesystem;

namespace bayesr::cli {

namespace {

constexpr const char* kPoolManifest = "pool.txt";
constexpr const char* kPoolMagic = "bayesr-noise-pool 1";

struct Report {
  std::vector<std::pair<std::string, std::string>> lines;

  void add(const std::string& name, const std::string& value) {
    lines.emplace_back(name, value);
  }
  void add(const std::string& name, double value) {
    add(name, format_value(value));
  }
  void print(std::ostream& out) const {
    for (const auto& [k, v] : lines) out << k << '\t' << v << '\n';
  }
};

// Runs fn(0..n-1) on up to `jobs` threads. Reports come back in index order;
// the first failure (lowest index) is rethrown after all workers finish.
void run_indexed(std::size_t n, int jobs,
                 const std::function<Report(std::size_t)>& fn,
                 std::ostream& out) {
  std::vector<Report> reports(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        reports[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    reports[i].print(out);
  }
}

void require_parent_dir(const fs::path& path, const std::string& flag) {
  const fs::path parent = path.parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw UsageError(flag + ": directory " + parent.string() +
                     " does not exist");
  }
}

void require_image_extension(const fs::path& path, const std::string& flag) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext != ".png" && ext != ".pfm") {
    throw UsageError(flag + ": " + path.string() +
                     " must end in .png or .pfm");
  }
}

// With one input, `out` names the file; with several it is a directory and
// each output takes the input's stem.
fs::path output_path(const fs::path& out, const fs::path& input, bool multi,
                     const std::string& format) {
  if (!multi) return out;
  return out / (input.stem().string() + "." + format);
}

void validate_outputs(const fs::path& out, std::size_t count,
                      const std::string& format, const std::string& flag) {
  if (count > 1) {
    if (fs::exists(out) && !fs::is_directory(out)) {
      throw UsageError(flag + ": with several inputs " + out.string() +
                       " must be a directory");
    }
    require_parent_dir(out, flag);
    if (format != "png" && format != "pfm") {
      throw UsageError("--format: expected png or pfm");
    }
  } else {
    require_parent_dir(out, flag);
    require_image_extension(out, flag);
  }
}

void check_kernel_choice(const KernelChoice& choice) {
  if (const auto* f = std::get_if<KernelFile>(&choice)) {
    if (!fs::is_regular_file(f->path)) {
      throw UsageError("--kernel: file " + f->path.string() + " not found");
    }
  }
}

struct HyperFlags {
  bool supervised = false;
  std::optional<double> gamma_ups, gamma_om, gamma_rho;
  std::optional<double> phi_ups, phi_om, phi_rho;
  std::optional<double> mu0, sigma0;

  void attach(CLI::App* app) {
    app->add_flag("--supervised", supervised,
                  "Use the supervised noise prior (phi_rho = 1e-3)");
    app->add_option("--gamma-ups", gamma_ups, "Gamma shape of upsilon");
    app->add_option("--gamma-om", gamma_om, "Gamma shape of omega");
    app->add_option("--gamma-rho", gamma_rho, "Gamma shape of rho");
    app->add_option("--phi-ups", phi_ups, "Gamma rate of upsilon");
    app->add_option("--phi-om", phi_om, "Gamma rate of omega");
    app->add_option("--phi-rho", phi_rho, "Gamma rate of rho");
    app->add_option("--mu0", mu0, "Prior mean of the noise mean");
    app->add_option("--sigma0", sigma0, "Prior precision of the noise mean");
  }

  HyperParams build() const {
    HyperParams h = supervised ? HyperParams::supervised()
                               : HyperParams::unsupervised();
    if (gamma_ups) h.gamma_upsilon = *gamma_ups;
    if (gamma_om) h.gamma_omega = *gamma_om;
    if (gamma_rho) h.gamma_rho = *gamma_rho;
    if (phi_ups) h.phi_upsilon = *phi_ups;
    if (phi_om) h.phi_omega = *phi_om;
    if (phi_rho) h.phi_rho = *phi_rho;
    if (mu0) h.mu0 = *mu0;
    if (sigma0) h.sigma0 = *sigma0;
    try {
      h.validate();
    } catch (const InvalidInput& e) {
      throw UsageError(e.what());
    }
    return h;
  }
};

NoisePool read_pool(const fs::path& dir) {
  std::ifstream in(dir / kPoolManifest);
  if (!in) throw InvalidInput("no noise pool manifest in " + dir.string());
  std::string line;
  if (!std::getline(in, line) || line != kPoolMagic) {
    throw InvalidInput("unrecognized noise pool manifest in " + dir.string());
  }
  NoisePool pool;
  std::string word;
  std::size_t count = 0;
  if (!(in >> word >> pool.patch_size) || word != "patch" ||
      !(in >> word >> count) || word != "count") {
    throw InvalidInput("malformed noise pool manifest in " + dir.string());
  }
  for (std::size_t k = 0; k < count; ++k) {
    std::string file;
    PatchStats s;
    if (!(in >> file >> s.mean >> s.variance)) {
      throw InvalidInput("noise pool manifest lists too few patches");
    }
    ImageStack p = read_pfm(dir / file);
    if (p.channels() != 1 ||
        p.shape() != Shape{pool.patch_size, pool.patch_size}) {
      throw InvalidInput("noise patch " + file + " has the wrong shape");
    }
    pool.patches.push_back(p.channel(0));
    pool.stats.push_back(s);
  }
  return pool;
}

void write_pool(const NoisePool& pool, const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream manifest(dir / kPoolManifest);
  if (!manifest) throw InvalidInput("cannot write pool in " + dir.string());
  manifest << kPoolMagic << '\n' << "patch " << pool.patch_size << '\n'
           << "count " << pool.size() << '\n'
           << std::setprecision(17);
  for (std::size_t k = 0; k < pool.size(); ++k) {
    std::ostringstream name;
    name << "patch_" << std::setw(5) << std::setfill('0') << k << ".pfm";
    write_pfm(ImageStack(pool.patches[k]), dir / name.str());
    manifest << name.str() << ' ' << pool.stats[k].mean << ' '
             << pool.stats[k].variance << '\n';
  }
  if (!manifest) throw InvalidInput("failed writing pool manifest");
}

// ---------------------------------------------------------------- degrade

struct DegradeArgs {
  std::vector<std::string> inputs;
  std::string out;
  std::string format = "png";
  int scale = 1;
  std::string kernel;
  std::string noise;
  std::string pool;
  std::uint64_t seed = 0;
  int jobs = 1;
};

int run_degrade(const DegradeArgs& a, std::ostream& out) {
  const KernelChoice choice =
      parse_kernel(a.kernel.empty() ? "bicubic" : a.kernel, a.scale);
  check_kernel_choice(choice);
  std::optional<NoiseSpec> noise;
  if (!a.noise.empty()) noise = parse_noise(a.noise);
  if (noise && !a.pool.empty()) {
    throw UsageError("--noise and --pool are mutually exclusive");
  }
  if (!a.pool.empty() && !fs::is_regular_file(fs::path(a.pool) / kPoolManifest)) {
    throw UsageError("--pool: " + a.pool + " holds no noise pool");
  }
  const bool multi = a.inputs.size() > 1;
  validate_outputs(a.out, a.inputs.size(), a.format, "--out");

  const DegradationOperator op(resolve_kernel(choice), a.scale);
  std::optional<NoisePool> pool;
  if (!a.pool.empty()) pool = read_pool(a.pool);
  if (multi) fs::create_directories(a.out);

  run_indexed(a.inputs.size(), a.jobs, [&](std::size_t i) {
    const fs::path input = a.inputs[i];
    const ImageStack hr = read_image(input);
    const std::uint64_t file_seed = a.seed + i;
    std::vector<ImagePlane> planes;
    for (int c = 0; c < hr.channels(); ++c) {
      const std::uint64_t s = derive_seed(file_seed, c);
      const ImagePlane& clean = hr.channel(c);
      if (pool) {
        planes.push_back(pseudo_degrade(op, clean, *pool, s));
        continue;
      }
      ImagePlane lr = op.apply(clean);
      if (noise && noise->kind == NoiseSpec::Kind::kAwgn) {
        lr = add_awgn(lr, noise->first / 255.0, s);
      } else if (noise) {
        lr = add_signal_noise(lr, noise->first, noise->second, s);
      }
      planes.push_back(std::move(lr));
    }
    const fs::path dest = output_path(a.out, input, multi, a.format);
    write_image(ImageStack(std::move(planes)), dest);
    Report r;
    r.add("output", dest.string());
    return r;
  }, out);
  return kExitOk;
}

// ---------------------------------------------------------------- restore

struct RestoreArgs {
  std::vector<std::string> inputs;
  std::string out;
  std::string format = "png";
  int scale = 1;
  std::string kernel;
  int max_sweeps = 500;
  double tol = 1e-6;
  std::string order;
  std::string trace;
  std::string dump_state;
  int jobs = 1;
  HyperFlags hyper;
};

int run_restore(const RestoreArgs& a, std::ostream& out) {
  const KernelChoice choice =
      parse_kernel(a.kernel.empty() ? "bicubic" : a.kernel, a.scale);
  check_kernel_choice(choice);
  const HyperParams hyper = a.hyper.build();
  SolveSchedule schedule;
  schedule.max_sweeps = a.max_sweeps;
  schedule.rel_tol = a.tol;
  if (!a.order.empty()) schedule.order = parse_order(a.order);
  try {
    schedule.validate();
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  const bool multi = a.inputs.size() > 1;
  validate_outputs(a.out, a.inputs.size(), a.format, "--out");
  if (!a.trace.empty()) require_parent_dir(a.trace, "--trace");
  if (!a.dump_state.empty()) require_parent_dir(a.dump_state, "--dump-state");

  const DegradationOperator op(resolve_kernel(choice), a.scale);
  if (multi) {
    fs::create_directories(a.out);
    if (!a.trace.empty()) fs::create_directories(a.trace);
  }

  run_indexed(a.inputs.size(), a.jobs, [&](std::size_t i) {
    const fs::path input = a.inputs[i];
    const ImageStack y = read_image(input);
    std::vector<VariationalState> states;
    std::vector<ImagePlane> restored;
    std::vector<std::vector<double>> traces;
    int sweeps = 0;
    bool converged = true;
    double objective = 0.0;
    for (int c = 0; c < y.channels(); ++c) {
      SolveResult res = solve(y.channel(c), op, hyper, schedule);
      sweeps = std::max(sweeps, res.sweeps);
      converged = converged && res.converged;
      objective += res.trace.back();
      quantize_to_float(res.state);
      restored.push_back(deterministic_restore(res.state));
      traces.push_back(std::move(res.trace));
      states.push_back(std::move(res.state));
    }
    const fs::path dest = output_path(a.out, input, multi, a.format);
    write_image(ImageStack(std::move(restored)), dest);
    if (!a.trace.empty()) {
      const fs::path tpath =
          multi ? fs::path(a.trace) / (input.stem().string() + ".tsv")
                : fs::path(a.trace);
      std::ofstream t(tpath);
      if (!t) throw InvalidInput("cannot write trace " + tpath.string());
      t << "channel\tsweep\tobjective\n" << std::setprecision(17);
      for (std::size_t c = 0; c < traces.size(); ++c) {
        for (std::size_t k = 0; k < traces[c].size(); ++k) {
          t << c << '\t' << k << '\t' << traces[c][k] << '\n';
        }
      }
    }
    if (!a.dump_state.empty()) {
      dump_state(states, multi ? fs::path(a.dump_state) / input.stem()
                               : fs::path(a.dump_state));
    }
    Report r;
    r.add("output", dest.string());
    r.add("sweeps", std::to_string(sweeps));
    r.add("converged", converged ? "1" : "0");
    r.add("objective", objective);
    return r;
  }, out);
  return kExitOk;
}

// ----------------------------------------------------------------- sample

struct SampleArgs {
  std::string state;
  std::string out_dir;
  std::string format = "png";
  int count = 10;
  std::uint64_t seed = 0;
};

int run_sample(const SampleArgs& a, std::ostream& out) {
  if (!fs::is_regular_file(fs::path(a.state) / "manifest.txt")) {
    throw UsageError("--state: " + a.state + " holds no state dump");
  }
  if (a.count < 1) throw UsageError("--n must be >= 1");
  if (a.format != "png" && a.format != "pfm") {
    throw UsageError("--format: expected png or pfm");
  }
  require_parent_dir(a.out_dir, "--out-dir");
  const std::vector<VariationalState> states = load_state(a.state);
  fs::create_directories(a.out_dir);

  std::vector<RestorationSet> sets;
  for (std::size_t c = 0; c < states.size(); ++c) {
    const std::uint64_t base = a.seed + c * static_cast<std::uint64_t>(a.count);
    sets.push_back(sample_restorations(states[c], a.count, base));
  }
  for (int k = 0; k < a.count; ++k) {
    std::vector<ImagePlane> planes;
    for (const RestorationSet& s : sets) planes.push_back(s.samples[k]);
    std::ostringstream name;
    name << "sample_" << std::setw(3) << std::setfill('0') << k << "."
         << a.format;
    write_image(ImageStack(std::move(planes)), fs::path(a.out_dir) / name.str());
  }
  Report r;
  r.add("samples", std::to_string(a.count));
  if (a.count >= 2) {
    double div = 0.0;
    for (const RestorationSet& s : sets) div += diversity_score(s);
    r.add("diversity", div / static_cast<double>(sets.size()));
  }
  r.print(out);
  return kExitOk;
}

// ------------------------------------------------------------------- eval

struct EvalArgs {
  std::vector<std::string> metrics;
  std::string ref;
  std::string test;
  int sr_scale = 0;
  int crop = 0;
  bool y_channel = false;
  int scale = 1;
  std::string kernel;
  int shift_crop = 60;
  int max_shift = 40;
};

int run_eval(const EvalArgs& a, std::ostream& out) {
  std::vector<std::string> metrics = a.metrics;
  if (metrics.empty()) metrics = {"psnr"};
  for (const std::string& m : metrics) {
    if (m != "psnr" && m != "ssim" && m != "lrpsnr" && m != "shifted") {
      throw UsageError("--metric: unknown metric '" + m + "'");
    }
  }
  MetricConfig cfg;
  if (a.sr_scale > 0) {
    cfg = MetricConfig::super_resolution(a.sr_scale);
  } else {
    cfg.border_crop = a.crop;
    cfg.use_y_channel = a.y_channel;
  }
  if (cfg.border_crop < 0) throw UsageError("--crop must be >= 0");
  std::optional<KernelChoice> choice;
  if (std::find(metrics.begin(), metrics.end(), "lrpsnr") != metrics.end()) {
    choice = parse_kernel(a.kernel.empty() ? "bicubic" : a.kernel, a.scale);
    check_kernel_choice(*choice);
  }
  const ImageStack ref = read_image(a.ref);
  const ImageStack test = read_image(a.test);
  Report r;
  for (const std::string& m : metrics) {
    if (m == "psnr") {
      r.add("psnr", std::min(psnr(ref, test, cfg), kPsnrCap));
    } else if (m == "ssim") {
      r.add("ssim", ssim(ref, test, cfg));
    } else if (m == "lrpsnr") {
      // ref is the LR observation, test the HR restoration.
      const DegradationOperator op(resolve_kernel(*choice), a.scale);
      r.add("lrpsnr", std::min(lrpsnr(test, ref, op), kPsnrCap));
    } else {
      const ShiftedPsnr s = shifted_max_psnr(ref, test, a.shift_crop,
                                             a.max_shift);
      r.add("shifted_psnr", std::min(s.psnr, kPsnrCap));
      r.add("shift_dx", std::to_string(s.dx));
      r.add("shift_dy", std::to_string(s.dy));
    }
  }
  r.print(out);
  return kExitOk;
}

// ---------------------------------------------------------- extract-noise

struct ExtractArgs {
  std::vector<std::string> inputs;
  std::string out;
  int patch = 64;
  int stride = 32;
};

int run_extract(const ExtractArgs& a, std::ostream& out) {
  if (a.patch < 2 || a.stride < 1) {
    throw UsageError("--patch must be >= 2 and --stride >= 1");
  }
  require_parent_dir(a.out, "--out");
  std::vector<ImagePlane> planes;
  for (const std::string& in : a.inputs) {
    const ImageStack img = read_image(in);
    for (const ImagePlane& p : img.planes()) planes.push_back(p);
  }
  const NoisePool pool = extract_noise_patches(planes, a.patch, a.stride);
  write_pool(pool, a.out);
  Report r;
  r.add("patches", std::to_string(pool.size()));
  r.print(out);
  return kExitOk;
}

// ------------------------------------------------------------- fit-kernel

struct FitArgs {
  std::vector<std::string> hr;
  std::vector<std::string> lr;
  int scale = 1;
  int size = 13;
  std::string out;
};

int run_fit(const FitArgs& a, std::ostream& out) {
  if (a.hr.size() != a.lr.size()) {
    throw UsageError("--hr and --lr need the same number of files");
  }
  if (a.size <= 0 || a.size % 2 == 0) {
    throw UsageError("--size must be odd and positive");
  }
  require_parent_dir(a.out, "--out");
  std::vector<ImagePlane> hr;
  std::vector<ImagePlane> lr;
  for (std::size_t i = 0; i < a.hr.size(); ++i) {
    const ImageStack h = read_image(a.hr[i]);
    const ImageStack l = read_image(a.lr[i]);
    if (h.channels() != l.channels()) {
      throw InvalidInput("fit-kernel: pair " + std::to_string(i) +
                         " differs in channel count");
    }
    for (int c = 0; c < h.channels(); ++c) {
      hr.push_back(h.channel(c));
      lr.push_back(l.channel(c));
    }
  }
  const BlurKernel k = fit_kernel(hr, lr, a.scale, a.size);
  write_kernel_file(k, a.out);
  const DegradationOperator op(k, a.scale);
  double sse = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < hr.size(); ++i) {
    const ImagePlane d = op.apply(hr[i]) - lr[i];
    sse += dot(d, d);
    n += d.size();
  }
  Report r;
  r.add("kernel_size", std::to_string(a.size));
  r.add("residual_rms", std::sqrt(sse / static_cast<double>(n)));
  r.print(out);
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Bayesian image restoration and super-resolution", "bayesr"};
  app.require_subcommand(1);

  DegradeArgs degrade;
  CLI::App* deg = app.add_subcommand("degrade", "Blur, decimate and add noise");
  deg->add_option("--input", degrade.inputs, "HR image(s)")
      ->required()
      ->check(CLI::ExistingFile);
  deg->add_option("--out", degrade.out, "Output file (directory if several)")
      ->required();
  deg->add_option("--format", degrade.format, "png or pfm for several inputs");
  deg->add_option("--scale", degrade.scale, "Downscaling factor")
      ->check(CLI::PositiveNumber);
  deg->add_option("--kernel", degrade.kernel,
                  "bicubic | delta | gauss:SIZE,S1,S2,THETA | file:PATH");
  deg->add_option("--noise", degrade.noise, "awgn:SIGMA | shot:SR,SS (0-255)");
  deg->add_option("--pool", degrade.pool, "Noise pool directory");
  deg->add_option("--seed", degrade.seed, "RNG seed");
  deg->add_option("--jobs", degrade.jobs, "Parallel files")
      ->check(CLI::PositiveNumber);

  RestoreArgs restore;
  CLI::App* res = app.add_subcommand("restore", "Variational restoration");
  res->add_option("--input", restore.inputs, "LR observation(s)")
      ->required()
      ->check(CLI::ExistingFile);
  res->add_option("--out", restore.out, "Output file (directory if several)")
      ->required();
  res->add_option("--format", restore.format, "png or pfm for several inputs");
  res->add_option("--scale", restore.scale, "Upscaling factor")
      ->check(CLI::PositiveNumber);
  res->add_option("--kernel", restore.kernel,
                  "bicubic | delta | gauss:SIZE,S1,S2,THETA | file:PATH");
  res->add_option("--max-sweeps", restore.max_sweeps, "Sweep budget")
      ->check(CLI::PositiveNumber);
  res->add_option("--tol", restore.tol, "Relative objective tolerance")
      ->check(CLI::PositiveNumber);
  res->add_option("--order", restore.order, "Update order, e.g. m,z,x,ups,om,rho");
  res->add_option("--trace", restore.trace, "Objective trace TSV");
  res->add_option("--dump-state", restore.dump_state, "State dump directory");
  res->add_option("--jobs", restore.jobs, "Parallel files")
      ->check(CLI::PositiveNumber);
  restore.hyper.attach(res);

  SampleArgs sample;
  CLI::App* smp = app.add_subcommand("sample", "Stochastic restorations");
  smp->add_option("--state", sample.state, "State dump directory")->required();
  smp->add_option("--out-dir", sample.out_dir, "Output directory")->required();
  smp->add_option("--n", sample.count, "Number of samples");
  smp->add_option("--format", sample.format, "png or pfm");
  smp->add_option("--seed", sample.seed, "RNG seed");

  EvalArgs eval;
  CLI::App* ev = app.add_subcommand("eval", "Image quality metrics");
  ev->add_option("--metric", eval.metrics, "psnr | ssim | lrpsnr | shifted");
  ev->add_option("--ref", eval.ref, "Reference (LR observation for lrpsnr)")
      ->required()
      ->check(CLI::ExistingFile);
  ev->add_option("--test", eval.test, "Image under test")
      ->required()
      ->check(CLI::ExistingFile);
  ev->add_option("--sr-scale", eval.sr_scale,
                 "Score luma with scale+4 border pixels removed");
  ev->add_option("--crop", eval.crop, "Border pixels ignored per side");
  ev->add_flag("--y-channel", eval.y_channel, "Score BT.601 luma");
  ev->add_option("--scale", eval.scale, "Scale for lrpsnr")
      ->check(CLI::PositiveNumber);
  ev->add_option("--kernel", eval.kernel, "Kernel for lrpsnr");
  ev->add_option("--shift-crop", eval.shift_crop, "Central patch size");
  ev->add_option("--max-shift", eval.max_shift, "Largest shift searched");

  ExtractArgs extract;
  CLI::App* ex = app.add_subcommand("extract-noise", "Harvest a noise pool");
  ex->add_option("--input", extract.inputs, "Observation(s)")
      ->required()
      ->check(CLI::ExistingFile);
  ex->add_option("--out", extract.out, "Pool directory")->required();
  ex->add_option("--patch", extract.patch, "Window size");
  ex->add_option("--stride", extract.stride, "Window stride");

  FitArgs fit;
  CLI::App* fk = app.add_subcommand("fit-kernel", "Least-squares kernel fit");
  fk->add_option("--hr", fit.hr, "HR image(s)")
      ->required()
      ->check(CLI::ExistingFile);
  fk->add_option("--lr", fit.lr, "Matching LR image(s)")
      ->required()
      ->check(CLI::ExistingFile);
  fk->add_option("--scale", fit.scale, "Downscaling factor")
      ->check(CLI::PositiveNumber);
  fk->add_option("--size", fit.size, "Kernel size (odd)");
  fk->add_option("--out", fit.out, "Kernel file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (deg->parsed()) return run_degrade(degrade, out);
    if (res->parsed()) return run_restore(restore, out);
    if (smp->parsed()) return run_sample(sample, out);
    if (ev->parsed()) return run_eval(eval, out);
    if (ex->parsed()) return run_extract(extract, out);
    if (fk->parsed()) return run_fit(fit, out);
  } catch (const UsageError& e) {
    err << "bayesr: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "bayesr: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace bayesr::cli
