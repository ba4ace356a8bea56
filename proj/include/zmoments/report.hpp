#ifndef ZMOMENTS_REPORT_HPP
#define ZMOMENTS_REPORT_HPP

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "zmoments/moment_lab.hpp"

namespace zmoments {

/// Every parsed flag of a run, kept verbatim for reproducibility.
struct RunConfig {
  std::string command;
  std::map<std::string, std::string> values;
};

struct MomentReport {
  RunConfig config;
  std::optional<ConstructionParams> params;
  std::optional<MomentIntegral> M_k;
  std::optional<IResult> I;
  std::optional<DiagonalI> diagonal;
  std::vector<Lemma2Values> lemma2;
  std::optional<Lemma1Chain> lemma1;
  std::optional<SquarefreeCheck> squarefree;
  std::optional<HolderChain> holder;
  std::optional<TheoremBound> theorem;
  std::optional<UniformGrid> grid;
  std::map<std::string, double> tolerances;
  std::vector<Audit> audits;

  void add(const std::vector<Audit>& more) { audits.insert(audits.end(), more.begin(), more.end()); }
  bool all_pass() const;
  std::vector<std::string> failures() const;
};

nlohmann::json params_json(const ConstructionParams& params);
nlohmann::json report_json(const MomentReport& report);
void write_audit_csv(std::ostream& out, const std::vector<Audit>& audits);

struct PipelineOptions {
  double step = kDefaultStep;
  std::size_t squarefree_samples = 2000;
  std::uint64_t seed = 20240601;
  bool truncated_quadrature = true;
  bool lemma2 = true;
  bool diagonal = true;
  bool lemma1 = true;
  bool theorem = true;
};

// Full run: construction, I(T) and its diagonal model, the mean-value bound per active
// exponent, the lower-bound chain, Hoelder, and the final inequality.
MomentReport run_pipeline(const ConstructionParams& params, const KernelSpec& spec, const PipelineOptions& options,
                          RunConfig config);

}  // namespace zmoments

#endif  // ZMOMENTS_REPORT_HPP
