#include "logtr/job.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "logtr/error.hpp"
#include "logtr/image_io.hpp"
#include "logtr/tensor_file.hpp"
#include "logtr/tensor_ring.hpp"

namespace logtr {

namespace {

const std::vector<Index> kDefaultImageFactors{2, 2, 2, 2, 2, 2, 2, 2};

bool is_png(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".png";
}

void check_writable(const std::filesystem::path& p, const char* what) {
  if (p.empty()) return;
  const auto dir = p.parent_path();
  if (!dir.empty() && !std::filesystem::is_directory(dir)) {
    throw ArgumentError(std::string(what) + " directory does not exist: " + dir.string());
  }
}

}  // namespace

void JobConfig::validate() const {
  if (input.empty()) throw ArgumentError("no input given");
  mask.validate();
  solver.validate();
  if (vdt_rows.empty() != vdt_cols.empty()) {
    throw ArgumentError("--vdt-rows and --vdt-cols must be given together");
  }
  if (no_vdt && !vdt_rows.empty()) throw ArgumentError("--no-vdt conflicts with --vdt-rows/cols");
  check_writable(out, "output");
  check_writable(report, "report");
  check_writable(trace, "trace");
}

std::optional<VdtPlan> resolve_vdt_plan(const JobConfig& config, const Dims& source_dims) {
  if (config.no_vdt) return std::nullopt;
  if (!config.vdt_rows.empty()) {
    return VdtPlan::for_source(source_dims, config.vdt_rows, config.vdt_cols, config.vdt_permute);
  }
  if (source_dims.size() >= 2 && source_dims[0] == 256 && source_dims[1] == 256 &&
      !config.vdt_permute) {
    return VdtPlan::for_source(source_dims, kDefaultImageFactors, kDefaultImageFactors);
  }
  return std::nullopt;
}

DenseTensor load_input(const std::filesystem::path& path) {
  return is_png(path) ? load_image(path) : load_tensor(path);
}

void save_output(const std::filesystem::path& path, const DenseTensor& t) {
  if (is_png(path)) {
    save_image(path, t);
  } else {
    save_tensor(path, t);
  }
}

std::string trace_csv(const std::vector<IterationRecord>& trace) {
  std::ostringstream os;
  os << "iter,rel_change,primal_residual,eta,elapsed_ms\n";
  os << std::setprecision(17);
  for (const auto& r : trace) {
    os << r.iter << ',' << r.rel_change << ',' << r.primal_residual << ',' << r.eta << ','
       << r.elapsed_ms << '\n';
  }
  return os.str();
}

JobResult complete_tensor(const DenseTensor& input, const JobConfig& config) {
  const Mask mask = generate_mask(input.dims(), config.mask);
  const auto plan = resolve_vdt_plan(config, input.dims());

  DenseTensor observed = apply_mask(input, mask);
  Mask work_mask = mask;
  if (plan) {
    observed = vdt_forward(observed, *plan);
    work_mask = Mask::from_tensor(vdt_forward(mask.to_tensor(), *plan));
  }

  // Metrics need two spatial modes; order-1 data is scored as a column.
  const DenseTensor reference =
      input.order() >= 2 ? input : reshape(input, {input.size(), 1});

  const std::vector<double> candidates =
      config.eta0_sweep ? kEta0Sweep : std::vector<double>{config.solver.eta0};

  std::optional<JobResult> best;
  for (double eta0 : candidates) {
    SolverOptions opts = config.solver;
    opts.eta0 = eta0;
    opts.eta_max = std::max(opts.eta_max, eta0);
    const auto problem = CompletionProblem::make(observed, work_mask, opts);
    IterationCallback cb;
    if (config.verbose) {
      cb = [](const IterationRecord& r) {
        if (r.iter % 25 == 0) {
          std::cerr << "iter " << r.iter << " rel_change " << r.rel_change << " residual "
                    << r.primal_residual << " eta " << r.eta << '\n';
        }
      };
    }
    SolveResult solved = solve(problem, cb);

    DenseTensor recovered = plan ? vdt_inverse(solved.recovered, *plan) : solved.recovered;
    const DenseTensor scored = input.order() >= 2 ? recovered : reshape(recovered, reference.dims());
    QualityReport report = quality_report(reference, scored);
    report.iterations = solved.iterations;
    report.final_residual = solved.trace.empty() ? 0.0 : solved.trace.back().primal_residual;
    report.elapsed_ms = solved.trace.empty() ? 0.0 : solved.trace.back().elapsed_ms;

    const double ref_norm = input.frobenius_norm();
    const double err = distance(recovered, input);
    JobResult r{std::move(recovered), std::move(report), std::move(solved.trace), solved.converged,
                eta0, ref_norm > 0.0 ? err / ref_norm : err};
    if (config.verbose) {
      std::cerr << "eta0 " << eta0 << ": PSNR " << r.report.psnr_db << " dB, SSIM "
                << r.report.ssim << ", " << r.report.iterations << " iterations\n";
    }
    if (!best || r.report.psnr_db > best->report.psnr_db) best = std::move(r);
  }
  return std::move(*best);
}

ExitCode run_job(const JobConfig& config) {
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return ExitCode::invalid_config;
  }

  try {
    const DenseTensor input = load_input(config.input);
    const JobResult result = complete_tensor(input, config);

    if (!config.out.empty()) save_output(config.out, result.recovered);
    if (!config.report.empty()) {
      auto j = nlohmann::json::parse(result.report.to_json());
      j["converged"] = result.converged;
      j["eta0"] = result.eta0;
      j["relative_error"] = result.relative_error;
      std::ofstream os(config.report);
      if (!(os << j.dump(2) << '\n')) throw IoError("cannot write " + config.report.string());
    }
    if (!config.trace.empty()) {
      std::ofstream os(config.trace);
      if (!(os << trace_csv(result.trace))) throw IoError("cannot write " + config.trace.string());
    }
    if (result.report.exact_planes > 0) {
      std::cerr << "warning: " << result.report.exact_planes
                << " plane(s) recovered exactly (PSNR inf), left out of the PSNR average\n";
    }
    std::cout << "PSNR " << (std::isinf(result.report.psnr_db) ? std::string("inf")
                                                               : std::to_string(result.report.psnr_db))
              << " dB  SSIM " << result.report.ssim << "  iterations " << result.report.iterations
              << (result.converged ? "" : " (iteration cap)") << '\n';
    return ExitCode::ok;
  } catch (const DivergedError& e) {
    std::cerr << "diverged: " << e.what() << '\n';
    return ExitCode::diverged;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return ExitCode::io_error;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return ExitCode::invalid_config;
  }
}

namespace {

// "key = value" lines become "--key value" (or "--key" for true, nothing for
// false), placed ahead of the real arguments so that flags override them.
std::vector<std::string> config_file_args(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::vector<std::string> args;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ArgumentError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value == "true") {
      args.push_back("--" + key);
    } else if (value != "false") {
      args.push_back("--" + key);
      args.push_back(value);
    }
  }
  return args;
}

// "1,4,3,2" -> {0, 3, 2, 1}
std::vector<Index> parse_permutation(const std::string& text) {
  std::vector<Index> order = parse_factors(text);
  for (Index& v : order) --v;
  return order;
}

void add_complete_options(CLI::App& cmd, JobConfig& cfg, std::string& mask_kind,
                          std::string& penalty, std::string& rows, std::string& cols,
                          std::string& perm, std::string& mask_file) {
  cmd.add_option("--input", cfg.input, "Input image (.png) or tensor file")->required();
  cmd.add_option("--mask", mask_kind, "Mask kind: random, stripes or external")
      ->check(CLI::IsMember({"random", "stripes", "external"}));
  cmd.add_option("--sr", cfg.mask.sr, "Sampling rate for random masks");
  cmd.add_option("--seed", cfg.mask.seed, "Mask seed");
  cmd.add_flag("--shared-mask", cfg.mask.shared_spatial,
               "Draw one spatial mask shared by all channels");
  cmd.add_option("--stripe-axis", cfg.mask.stripe_axis, "0 removes rows, 1 removes columns");
  cmd.add_option("--stripe-period", cfg.mask.stripe_period, "Stripe period in pixels");
  cmd.add_option("--stripe-width", cfg.mask.stripe_width, "Missing pixels per period");
  cmd.add_option("--mask-file", mask_file, "8-bit grayscale mask image, 0 = missing");
  cmd.add_option("--penalty", penalty, "logdet (LogTR) or nuclear (TRNN)")
      ->check(CLI::IsMember({"logdet", "nuclear"}));
  cmd.add_option("--eps", cfg.solver.epsilon, "Logdet smoothing epsilon");
  cmd.add_option("--eta0", cfg.solver.eta0, "Initial penalty parameter");
  cmd.add_flag("--eta0-sweep", cfg.eta0_sweep, "Try eta0 in {1e-9..1e-6}, keep best PSNR");
  cmd.add_option("--growth", cfg.solver.eta_growth, "Penalty growth factor per iteration");
  cmd.add_option("--eta-max", cfg.solver.eta_max, "Penalty cap");
  cmd.add_option("--max-iters", cfg.solver.max_iters, "Iteration cap");
  cmd.add_option("--rel-tol", cfg.solver.rel_tol, "Relative change stopping threshold");
  cmd.add_option("--residual-tol", cfg.solver.residual_tol,
                 "Primal residual required before stopping");
  cmd.add_option("--vdt-rows", rows, "Row factors, e.g. 2x2x2x2x2x2x2x2");
  cmd.add_option("--vdt-cols", cols, "Column factors");
  cmd.add_option("--vdt-permute", perm, "1-based mode order applied before VDT, e.g. 1,4,3,2");
  cmd.add_flag("--no-vdt", cfg.no_vdt, "Complete the input tensor as is");
  cmd.add_option("--out", cfg.out, "Recovered output (.png or tensor file)");
  cmd.add_option("--report", cfg.report, "JSON quality report");
  cmd.add_option("--trace", cfg.trace, "CSV convergence trace");
  cmd.add_flag("-v,--verbose", cfg.verbose, "Progress on stderr");
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Tensor completion by logdet tensor ring rank minimization"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  JobConfig cfg;
  std::string mask_kind = "random";
  std::string penalty = "logdet";
  std::string rows, cols, perm, mask_file, config_path;
  auto* complete = app.add_subcommand("complete", "Recover missing entries of an image or tensor");
  complete->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  complete->add_option("--config", config_path, "key=value file; command-line flags override it");
  add_complete_options(*complete, cfg, mask_kind, penalty, rows, cols, perm, mask_file);

  std::string synth_dims, synth_ranks, synth_out;
  std::uint64_t synth_seed = 0;
  auto* synth = app.add_subcommand("synth", "Write a random tensor ring tensor");
  synth->add_option("--dims", synth_dims, "Extents, e.g. 6x6x6x6")->required();
  synth->add_option("--ranks", synth_ranks, "TR ranks, e.g. 2x2x2x2")->required();
  synth->add_option("--seed", synth_seed, "Core seed");
  synth->add_option("--out", synth_out, "Output tensor file")->required();

  // Splice config-file arguments in front of the subcommand's own flags.
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t k = 0; k + 1 < args.size(); ++k) {
    if (args[k] == "--config") {
      try {
        auto extra = config_file_args(args[k + 1]);
        const auto sub = std::find(args.begin(), args.end(), "complete");
        if (sub != args.end()) args.insert(sub + 1, extra.begin(), extra.end());
      } catch (const IoError& e) {
        std::cerr << e.what() << '\n';
        return static_cast<int>(ExitCode::io_error);
      } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return static_cast<int>(ExitCode::invalid_config);
      }
      break;
    }
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::invalid_config);
  }

  if (synth->parsed()) {
    try {
      const auto f = random_tr_factors(parse_factors(synth_dims), parse_factors(synth_ranks),
                                       synth_seed);
      save_tensor(synth_out, tr_synthesize(f));
      return 0;
    } catch (const IoError& e) {
      std::cerr << e.what() << '\n';
      return static_cast<int>(ExitCode::io_error);
    } catch (const std::exception& e) {
      std::cerr << e.what() << '\n';
      return static_cast<int>(ExitCode::invalid_config);
    }
  }

  try {
    cfg.mask.kind = mask_kind == "stripes"    ? MaskKind::stripes
                    : mask_kind == "external" ? MaskKind::external
                                              : MaskKind::random;
    if (!mask_file.empty()) {
      cfg.mask.path = mask_file;
      cfg.mask.kind = MaskKind::external;
    }
    cfg.solver.penalty = penalty == "nuclear" ? Penalty::nuclear : Penalty::logdet;
    if (!rows.empty()) cfg.vdt_rows = parse_factors(rows);
    if (!cols.empty()) cfg.vdt_cols = parse_factors(cols);
    if (!perm.empty()) cfg.vdt_permute = parse_permutation(perm);
  } catch (const std::exception& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return static_cast<int>(ExitCode::invalid_config);
  }
  return static_cast<int>(run_job(cfg));
}

}  // namespace logtr
