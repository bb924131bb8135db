#ifndef MIKADO_CHECKS_HPP
#define MIKADO_CHECKS_HPP

#include <memory>
#include <string>
#include <vector>

#include "mikado/config.hpp"
#include "mikado/principal.hpp"

namespace mikado
{

struct CheckResult
{
  int id = 0;
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
  double seconds = 0.0;

  std::string line() const;  // "PASS [n] name: detail"
};

// Lazily built reference data, branches and the artifact directory shared by the checks.
class CheckContext
{
public:
  explicit CheckContext(RunConfig config);

  const RunConfig &config() const { return config_; }
  const GridPtr &grid();
  const DataSet &data();
  const BranchState &branch(int parity);
  std::vector<double> tgrid() const;

  // Writes {stage}-{hash}.{ext} into the output directory and returns the path.
  std::string write(const std::string &stage, const std::string &ext, const std::string &content);
  const std::vector<std::string> &artifacts() const { return artifacts_; }

private:
  RunConfig config_;
  std::string hash_;
  GridPtr grid_;
  std::unique_ptr<DataSet> data_;
  std::unique_ptr<BranchState> b1_, b2_;
  std::vector<std::string> artifacts_;
};

CheckResult check_nash_reconstruction(CheckContext &ctx);  // 1
CheckResult check_operator_identities(CheckContext &ctx);  // 2
CheckResult check_mikado_steady(CheckContext &ctx);        // 3
CheckResult check_support_volume(CheckContext &ctx);       // 4
CheckResult check_equal_data(CheckContext &ctx);           // 5
CheckResult check_residual_identity(CheckContext &ctx);    // 6
CheckResult check_distinctness(CheckContext &ctx);         // 7
CheckResult check_stepper(CheckContext &ctx);              // 8
CheckResult check_perturbation(CheckContext &ctx);         // 9
CheckResult check_attainment(CheckContext &ctx);           // 10
CheckResult check_harnesses(CheckContext &ctx);            // 11

// Criterion ids of a suite: identities, inequalities, geometry, all.
std::vector<int> suite_ids(const std::string &suite);
CheckResult run_check(int id, CheckContext &ctx);

// JSON summary: banner, config echo, hash, checks and artifacts.
std::string summary_json(const std::string &command, const RunConfig &config, const std::vector<CheckResult> &checks,
                         const std::vector<std::string> &artifacts, const std::string &extra_json = "{}");

}  // namespace mikado

#endif  // MIKADO_CHECKS_HPP
