#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "logtr/masks.hpp"
#include "logtr/metrics.hpp"
#include "logtr/solver.hpp"
#include "logtr/vdt.hpp"

namespace logtr {

/// Process exit codes of the `complete` command.
enum class ExitCode : int {
  ok = 0,
  invalid_config = 2,
  io_error = 3,
  diverged = 4,
};

/// Candidate initial penalties tried by an eta0 sweep.
inline const std::vector<double> kEta0Sweep{1e-9, 1e-8, 1e-7, 1e-6};

struct JobConfig {
  std::filesystem::path input;
  MaskSpec mask;
  /// Both empty: the bundled default for 256x256 inputs, otherwise no tensorization.
  std::vector<Index> vdt_rows;
  std::vector<Index> vdt_cols;
  /// 0-based mode order applied before tensorization.
  std::optional<std::vector<Index>> vdt_permute;
  bool no_vdt = false;
  SolverOptions solver;
  /// Run every kEta0Sweep value and keep the highest-PSNR result.
  bool eta0_sweep = false;

  std::filesystem::path out;
  std::filesystem::path report;
  std::filesystem::path trace;
  bool verbose = false;

  /// Throws ArgumentError for inconsistent settings.
  void validate() const;
};

/// VDT plan the job applies to a source of the given dims, if any.
std::optional<VdtPlan> resolve_vdt_plan(const JobConfig& config, const Dims& source_dims);

struct JobResult {
  DenseTensor recovered;
  QualityReport report;
  std::vector<IterationRecord> trace;
  bool converged = false;
  double eta0 = 0.0;
  /// ||recovered - input||_F / ||input||_F.
  double relative_error = 0.0;
};

/// load -> mask -> VDT -> solve -> inverse VDT -> score. No files are written.
JobResult complete_tensor(const DenseTensor& input, const JobConfig& config);

/// Runs the whole pipeline and writes the configured outputs.
ExitCode run_job(const JobConfig& config);

/// Loads .png inputs as images and anything else as a tensor file.
DenseTensor load_input(const std::filesystem::path& path);
/// Writes .png outputs as images and anything else as a tensor file.
void save_output(const std::filesystem::path& path, const DenseTensor& t);

std::string trace_csv(const std::vector<IterationRecord>& trace);

/// Entry point of the `logtr` executable.
int run_cli(int argc, char** argv);

}  // namespace logtr
