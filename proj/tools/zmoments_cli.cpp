#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "zmoments/construction.hpp"
#include "zmoments/errors.hpp"
#include "zmoments/families.hpp"
#include "zmoments/moment_lab.hpp"
#include "zmoments/multiplicative.hpp"
#include "zmoments/report.hpp"
#include "zmoments/sylvester.hpp"
#include "zmoments/zeta.hpp"

namespace fs = std::filesystem;
using namespace zmoments;

namespace {

constexpr int kExitAuditFailed = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitResource = 3;
constexpr int kExitPrecision = 4;

struct AuditFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Plain key=value lines; '#' starts a comment. Keys are flag names without dashes.
std::vector<std::pair<std::string, std::string>> read_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file: " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config line " + std::to_string(number) + " is not key=value");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

// Config entries become ordinary flags placed before the command-line ones;
// a flag given on the command line wins.
std::vector<std::string> expand_config(const std::vector<std::string>& args, const std::set<std::string>& commands) {
  std::vector<std::string> out;
  std::string config;
  std::set<std::string> given;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--config" && i + 1 < args.size()) {
      config = args[++i];
      continue;
    }
    if (a.rfind("--config=", 0) == 0) {
      config = a.substr(9);
      continue;
    }
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
    out.push_back(a);
  }
  if (config.empty()) return out;
  auto at = std::find_if(out.begin() + 1, out.end(), [&](const std::string& a) { return commands.count(a) > 0; });
  if (at == out.end()) return out;
  std::vector<std::string> extra;
  for (const auto& [key, value] : read_config(config)) {
    if (given.count(key)) continue;
    if (value == "true" || value == "false") {
      if (value == "true") extra.push_back("--" + key);
      else extra.push_back("--no-" + key);
      continue;
    }
    extra.push_back("--" + key);
    extra.push_back(value);
  }
  out.insert(at + 1, extra.begin(), extra.end());
  return out;
}

RunConfig capture(const CLI::App& sub) {
  RunConfig config;
  config.command = sub.get_name();
  std::vector<const CLI::Option*> options = sub.get_options();
  if (const CLI::App* parent = sub.get_parent()) {
    const auto global = parent->get_options();
    options.insert(options.end(), global.begin(), global.end());
  }
  for (const CLI::Option* opt : options) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "h") continue;
    std::string value;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      for (std::size_t i = 0; i < results.size(); ++i) value += (i ? "," : "") + results[i];
    } else {
      value = opt->get_default_str();
    }
    config.values[name] = value;
  }
  return config;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open output file: " + path);
  out << text;
}

struct CommonRun {
  std::string k = "1.5";
  double T = 5000.0;
  double theta = kDeskTheta;
  bool desk_scale = true;
  double weight_constant = 20.0;
  double step = kDefaultStep;
  std::size_t squarefree_samples = 2000;
  std::uint64_t seed = 20240601;
  std::string out = "-";
  std::string audit_csv;
};

void add_common(CLI::App* sub, CommonRun& run) {
  sub->add_option("--k", run.k, "moment parameter k > 1 (decimal or p/q)");
  sub->add_option("--T", run.T, "height T");
  sub->add_option("--theta", run.theta, "kernel parameter theta");
  sub->add_flag("--desk-scale,!--no-desk-scale", run.desk_scale, "allow theta >= 1/10");
  sub->add_option("--weight-constant", run.weight_constant, "constant c in W = c k^3 a^2");
  sub->add_option("--step", run.step, "quadrature step in t");
  sub->add_option("--squarefree-samples", run.squarefree_samples, "random tuples for the squarefree device");
  sub->add_option("--seed", run.seed, "RNG seed");
  sub->add_option("--out", run.out, "JSON report path ('-' for stdout)");
  sub->add_option("--audit-csv", run.audit_csv, "CSV audit path");
}

ConstructionParams make_params(const CommonRun& run) {
  BuildOptions options;
  options.desk_scale = run.desk_scale;
  options.weight_constant = run.weight_constant;
  return build_params(parse_rational(run.k), run.T, run.theta, options);
}

KernelSpec kernel_spec(const CommonRun& run) {
  KernelSpec spec;
  spec.theta = run.theta;
  spec.validate();
  return spec;
}

void emit_report(const MomentReport& report, const CommonRun& run) {
  write_text(run.out, report_json(report).dump(2) + "\n");
  if (!run.audit_csv.empty()) {
    std::ofstream csv(run.audit_csv);
    if (!csv) throw InvalidArgument("cannot open audit CSV: " + run.audit_csv);
    write_audit_csv(csv, report.audits);
  }
  if (!report.all_pass()) {
    std::string names;
    for (const auto& n : report.failures()) names += (names.empty() ? "" : ", ") + n;
    throw AuditFailure(names);
  }
}

void run_verify(const CLI::App& sub, const CommonRun& run, PipelineOptions options) {
  if (!(run.step > 0.0)) throw InvalidArgument("step must be positive");
  options.step = run.step;
  options.squarefree_samples = run.squarefree_samples;
  options.seed = run.seed;
  const ConstructionParams params = make_params(run);
  emit_report(run_pipeline(params, kernel_spec(run), options, capture(sub)), run);
}

PipelineOptions only(bool lemma2, bool diagonal, bool lemma1, bool theorem) {
  PipelineOptions o;
  o.lemma2 = lemma2;
  o.diagonal = diagonal;
  o.lemma1 = lemma1;
  o.theorem = theorem;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zmoments: lower bounds for moments of zeta, desk-scale verification"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker cap (0 = hardware concurrency)");

  // sylvester
  auto* syl = app.add_subcommand("sylvester", "greedy Egyptian-fraction denominators");
  std::string alpha = "1";
  std::size_t count = 4;
  syl->add_option("--alpha", alpha, "target alpha in (0, 1]");
  syl->add_option("--count", count, "number of terms");

  // divisor
  auto* div = app.add_subcommand("divisor", "generalized divisor function d_k(n)");
  double div_k = 1.5;
  std::uint64_t div_n = 1000;
  std::string div_out = "-";
  div->add_option("--k", div_k, "k > 0");
  div->add_option("--N", div_n, "largest n");
  div->add_option("--out", div_out, "CSV path ('-' for stdout)");

  // zeta
  auto* zeta = app.add_subcommand("zeta", "zeta(1/2 + it) on a grid");
  double t_min = 0.0, t_max = 100.0, z_step = 1.0;
  std::string zeta_out = "-";
  zeta->add_option("--t-min", t_min);
  zeta->add_option("--t-max", t_max);
  zeta->add_option("--step", z_step);
  zeta->add_option("--out", zeta_out, "CSV path ('-' for stdout)");

  // construct
  auto* con = app.add_subcommand("construct", "construction parameters and coefficient supports");
  CommonRun con_run;
  add_common(con, con_run);
  std::string coeff_csv;
  con->add_option("--coeff-csv", coeff_csv, "write alpha and beta coefficients as CSV (prefix)");

  CommonRun l2_run, diag_run, l1_run, thm_run, all_run;
  auto* l2 = app.add_subcommand("verify-lemma2", "mean-value bound for every active polynomial");
  add_common(l2, l2_run);
  auto* dg = app.add_subcommand("verify-diagonal", "I(T) against its diagonal model and the Hoelder chain");
  add_common(dg, diag_run);
  auto* l1 = app.add_subcommand("verify-lemma1", "lower-bound chain for the diagonal");
  add_common(l1, l1_run);
  auto* th = app.add_subcommand("verify-theorem", "end-to-end moment inequality");
  add_common(th, thm_run);
  auto* all = app.add_subcommand("verify", "every audit");
  add_common(all, all_run);

  // audit-constants
  auto* ac = app.add_subcommand("audit-constants", "constant inequalities of the lower-bound chain");
  CommonRun ac_run;
  ac_run.T = 1e4;
  ac->add_option("--k", ac_run.k);
  ac->add_option("--T", ac_run.T);
  ac->add_option("--theta", ac_run.theta);
  ac->add_flag("--desk-scale,!--no-desk-scale", ac_run.desk_scale);
  ac->add_option("--out", ac_run.out, "CSV path ('-' for stdout)");

  // family
  auto* fam = app.add_subcommand("family", "twisted first moments over characters or discriminants");
  std::uint64_t fam_q = 0, fam_X = 0;
  std::string fam_k = "1.5";
  double vartheta = kFamilyTheta;
  std::string fam_out = "-", fam_summary;
  fam->add_option("--q", fam_q, "prime modulus (characters mod q)");
  fam->add_option("--X", fam_X, "discriminant bound (quadratic family)");
  fam->add_option("--k", fam_k);
  fam->add_option("--vartheta", vartheta);
  fam->add_option("--out", fam_out, "CSV path ('-' for stdout)");
  fam->add_option("--summary", fam_summary, "JSON summary path");

  std::vector<std::string> args(argv, argv + argc);
  try {
    std::set<std::string> commands;
    for (const CLI::App* sub : app.get_subcommands({})) commands.insert(sub->get_name());
    args = expand_config(args, commands);
    std::vector<char*> raw;
    for (auto& a : args) raw.push_back(a.data());
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    set_thread_limit(threads);
    if (*syl) {
      const SylvesterSequence seq = sylvester(parse_rational(alpha), count);
      std::cout << "n,s_n,remainder\n";
      for (std::size_t n = 1; n <= seq.size(); ++n)
        std::cout << n << ',' << seq.term(n).str() << ',' << to_string(seq.remainder(n)) << '\n';
    } else if (*div) {
      if (!(div_k > 0.0)) throw InvalidArgument("divisor: k must be positive");
      std::optional<DivisorTable> table;
      fs::path cache_file;
      if (const char* dir = std::getenv("ZMOMENTS_CACHE_DIR"); dir && *dir) {
        std::ostringstream name;
        name << "dk_" << std::setprecision(17) << div_k << "_" << div_n << ".dktb";
        cache_file = fs::path(dir) / name.str();
        if (fs::exists(cache_file)) {
          DivisorTable loaded = DivisorTable::load(cache_file);
          if (loaded.k() == div_k && loaded.limit() == div_n) table.emplace(std::move(loaded));
        }
      }
      if (!table) {
        table.emplace(sieve_divisor(div_k, div_n));
        if (!cache_file.empty()) {
          fs::create_directories(cache_file.parent_path());
          table->save(cache_file);
        }
      }
      std::ostringstream csv;
      csv << "n,d_k\n" << std::setprecision(17);
      for (std::uint64_t n = 1; n <= div_n; ++n) csv << n << ',' << (*table)[n] << '\n';
      write_text(div_out, csv.str());
    } else if (*zeta) {
      if (!(z_step > 0.0) || t_max < t_min) throw InvalidArgument("zeta: need step > 0 and t-max >= t-min");
      const auto n = static_cast<std::size_t>(std::floor((t_max - t_min) / z_step + 1e-9)) + 1;
      if (n > 50'000'000) throw ResourceLimit("zeta: too many grid points");
      std::vector<ZetaValue> values(n);
      parallel_blocks(n, 1024, [&](std::size_t b, std::size_t e, std::size_t) {
        for (std::size_t i = b; i < e; ++i) values[i] = zeta_critical(t_min + z_step * static_cast<double>(i));
      });
      std::ostringstream csv;
      csv << "t,re,im,abs,method,err\n" << std::setprecision(17);
      for (const auto& v : values)
        csv << v.t << ',' << v.value.real() << ',' << v.value.imag() << ',' << std::abs(v.value) << ','
            << to_string(v.method) << ',' << v.err << '\n';
      write_text(zeta_out, csv.str());
    } else if (*con) {
      const ConstructionParams params = make_params(con_run);
      const AlphaBeta ab = build_alpha_beta(params);
      nlohmann::json j;
      j["run_config"] = {{"command", "construct"}, {"values", capture(*con).values}};
      j["params"] = params_json(params);
      j["alpha"] = {{"limit", ab.alpha.limit()}, {"nonzero", ab.alpha.nonzero()}};
      j["beta"] = {{"limit", ab.beta.limit()}, {"nonzero", ab.beta.nonzero()}};
      {
        nlohmann::json ca = nlohmann::json::array(), cb = nlohmann::json::array();
        for (std::size_t l = 1; l <= params.active_A; ++l) ca.push_back(params.cutoff_A(l));
        for (std::size_t l = 1; l <= params.active_B; ++l) cb.push_back(params.cutoff_B(l));
        j["cutoffs_A"] = ca;
        j["cutoffs_B"] = cb;
      }
      write_text(con_run.out, j.dump(2) + "\n");
      if (!coeff_csv.empty()) {
        std::ofstream a(coeff_csv + "_alpha.csv"), b(coeff_csv + "_beta.csv");
        if (!a || !b) throw InvalidArgument("cannot open coefficient CSV with prefix " + coeff_csv);
        ab.alpha.write_csv(a);
        ab.beta.write_csv(b);
      }
    } else if (*l2) {
      run_verify(*l2, l2_run, only(true, false, false, false));
    } else if (*dg) {
      run_verify(*dg, diag_run, only(false, true, false, false));
    } else if (*l1) {
      run_verify(*l1, l1_run, only(false, false, true, false));
    } else if (*th) {
      run_verify(*th, thm_run, only(false, false, false, true));
    } else if (*all) {
      run_verify(*all, all_run, only(true, true, true, true));
    } else if (*ac) {
      const ConstructionParams params = make_params(ac_run);
      std::vector<Audit> audits;
      const TailLogSum tail = tail_log_sum(params.exponents.b);
      audits.push_back(make_audit("tail_log_sum_b_gt_2.3", tail.partial, 2.3, ">="));
      audits.push_back(make_audit("tail_log_sum_b_lt_2.5", tail.total(), 2.5, "<="));
      const Kernel kernel(kernel_spec(ac_run));
      const Lemma1Chain chain = lemma1_lower(params, kernel);
      audits.insert(audits.end(), chain.audits.begin(), chain.audits.end());
      std::ostringstream csv;
      write_audit_csv(csv, audits);
      write_text(ac_run.out, csv.str());
      std::string failed;
      for (const auto& a : audits)
        if (!a.pass) failed += (failed.empty() ? "" : ", ") + a.name;
      if (!failed.empty()) throw AuditFailure(failed);
    } else if (*fam) {
      if ((fam_q == 0) == (fam_X == 0)) throw InvalidArgument("family: give exactly one of --q and --X");
      const Rational k = parse_rational(fam_k);
      nlohmann::json summary;
      summary["run_config"] = {{"command", "family"}, {"values", capture(*fam).values}};
      std::ostringstream csv;
      csv << "label,L_re,L_im,product_re,product_im,summand_re,summand_im\n" << std::setprecision(17);
      auto rows = [&](const std::vector<FamilyRow>& rs) {
        for (const auto& r : rs)
          csv << r.label << ',' << r.L.real() << ',' << r.L.imag() << ',' << r.product.real() << ','
              << r.product.imag() << ',' << r.summand.real() << ',' << r.summand.imag() << '\n';
      };
      if (fam_q != 0) {
        const IqResult res = I_q(fam_q, k, vartheta);
        rows(res.rows);
        summary["I_q"] = {{"re", res.value.real()}, {"im", res.value.imag()}};
        summary["scale"] = res.scale;
        summary["diagonal_prediction"] = res.diagonal_prediction;
        summary["difference"] = {{"re", res.difference.real()}, {"im", res.difference.imag()}};
        summary["imag_relative"] = std::abs(res.value.imag()) / res.scale;
      } else {
        const IxResult res = I_X(fam_X, k, vartheta);
        rows(res.rows);
        summary["I_X"] = res.value;
        summary["scale"] = res.scale;
        summary["discriminants"] = res.rows.size();
      }
      write_text(fam_out, csv.str());
      if (!fam_summary.empty()) write_text(fam_summary, summary.dump(2) + "\n");
      else std::cerr << summary.dump() << '\n';
    }
  } catch (const AuditFailure& e) {
    std::cerr << "audit failed: " << e.what() << '\n';
    return kExitAuditFailed;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const InsufficientPrecision& e) {
    std::cerr << "insufficient precision: " << e.what() << '\n';
    return kExitPrecision;
  }
  return 0;
}
