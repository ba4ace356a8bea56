#include "zmoments/report.hpp"

#include <cmath>

namespace zmoments {

using nlohmann::json;

namespace {

json audit_json(const Audit& a) {
  return {{"lhs", a.lhs},           {"rhs", a.rhs},   {"relation", a.relation},
          {"log_space", a.log_space}, {"pass", a.pass}, {"slack_log", a.slack_log}};
}

json complex_json(cdouble z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json lemma2_json(const Lemma2Values& v) {
  json j = {{"side", v.side == PolySide::A ? "A" : "B"},
            {"ell", v.ell},
            {"exponent", v.exponent},
            {"numeric", v.numeric ? json(*v.numeric) : json(nullptr)},
            {"numeric_error", v.numeric_error},
            {"diagonal", v.diagonal},
            {"offdiag_bound", v.offdiag_bound},
            {"offdiag_exact", v.offdiag_exact},
            {"crude_offdiag_bound", v.crude_bound},
            {"dk_diagonal", v.divisor_diagonal},
            {"cap", v.cap}};
  return j;
}

}  // namespace

bool MomentReport::all_pass() const {
  for (const auto& a : audits)
    if (!a.pass) return false;
  return true;
}

std::vector<std::string> MomentReport::failures() const {
  std::vector<std::string> out;
  for (const auto& a : audits)
    if (!a.pass) out.push_back(a.name);
  return out;
}

json params_json(const ConstructionParams& p) {
  json a_terms = json::array(), b_terms = json::array();
  for (std::size_t l = 1; l <= p.terms(); ++l) {
    a_terms.push_back(p.exponents.a.term(l).str());
    b_terms.push_back(p.exponents.b.term(l).str());
  }
  return {{"k", to_string(p.k)},
          {"k_value", p.k_value},
          {"T", p.T},
          {"theta", p.theta},
          {"theta_paper", kAsymptoticTheta},
          {"desk_scale", p.desk_scale},
          {"weight_constant", p.weight_constant},
          {"T0", p.T0},
          {"log_T0", p.log_T0},
          {"exponents_a", a_terms},
          {"exponents_b", b_terms},
          {"log_weights_A", p.log_weight_A},
          {"log_weights_B", std::vector<double>(p.log_weight_B.begin() + 1, p.log_weight_B.end())},
          {"shifts_alpha", p.alpha},
          {"shifts_beta", std::vector<double>(p.beta.begin() + 1, p.beta.end())},
          {"active_A", p.active_A},
          {"active_B", p.active_B}};
}

json report_json(const MomentReport& r) {
  json j;
  j["run_config"] = {{"command", r.config.command}, {"values", r.config.values}};
  j["params"] = r.params ? params_json(*r.params) : json(nullptr);
  j["theta_paper"] = kAsymptoticTheta;
  j["theta_actual"] = r.params ? json(r.params->theta) : json(nullptr);
  j["M_k_numeric"] = r.M_k ? json{{"value", r.M_k->value}, {"error", r.M_k->error}} : json(nullptr);
  if (r.I) {
    json i = complex_json(r.I->value);
    i["error"] = r.I->error;
    i["abs_integral"] = r.I->abs_integral;
    i["truncation_constant"] = r.I->truncation_constant;
    i["truncation_budget"] = r.I->truncation_budget;
    i["truncated_quadrature"] = r.I->truncated_quadrature ? complex_json(*r.I->truncated_quadrature) : json(nullptr);
    i["truncated_identity"] = complex_json(r.I->truncated_exact);
    j["I_numeric"] = i;
  } else {
    j["I_numeric"] = nullptr;
  }
  j["I_diagonal"] = r.diagonal ? json(r.diagonal->value) : json(nullptr);
  j["offdiag_bound"] = r.diagonal ? json(r.diagonal->offdiag_bound) : json(nullptr);
  if (r.diagonal) {
    j["diagonal_detail"] = {{"mass", r.diagonal->mass},
                            {"offdiag_exact", complex_json(r.diagonal->offdiag_exact)},
                            {"crude_offdiag_bound", r.diagonal->crude_bound}};
  }
  json l2 = json::array();
  for (const auto& v : r.lemma2) l2.push_back(lemma2_json(v));
  j["lemma2_values"] = l2;
  if (r.lemma1) {
    const auto& c = *r.lemma1;
    j["lemma1_chain"] = {{"log_f_product", c.log_f_product},
                         {"log_k2_product", c.log_k2_product},
                         {"exponent_sum", c.exponent_sum},
                         {"log_subtraction", c.log_subtraction},
                         {"deficit", c.deficit},
                         {"log_mass_lower", c.log_mass_lower},
                         {"log_final_bound", c.log_final_bound},
                         {"log_mertens_bound", c.log_mertens_bound},
                         {"mertens_eps_log", c.mertens_eps_log},
                         {"log_lemma1_rhs", c.log_lemma1_rhs},
                         {"max_f", c.max_f}};
  } else {
    j["lemma1_chain"] = nullptr;
  }
  if (r.holder) {
    json factors = json::array();
    for (const auto& f : r.holder->factors)
      factors.push_back({{"name", f.name}, {"exponent", f.exponent}, {"integral", f.integral}});
    j["holder_lhs_rhs"] = {r.holder->lhs, r.holder->rhs};
    j["holder_detail"] = {{"ratio", r.holder->ratio},
                          {"inactive_mass", r.holder->inactive_mass},
                          {"exponent_total", r.holder->exponent_total},
                          {"factors", factors}};
  } else {
    j["holder_lhs_rhs"] = nullptr;
  }
  if (r.theorem) {
    j["theorem_bound_log"] = r.theorem->log_rhs;
    j["theorem_detail"] = {{"log_M", r.theorem->log_M},
                           {"log_I", r.theorem->log_I},
                           {"log_cap", r.theorem->log_cap},
                           {"log_middle", r.theorem->log_middle}};
  } else {
    j["theorem_bound_log"] = nullptr;
  }
  if (r.squarefree) {
    j["squarefree_check"] = {{"product_excess", r.squarefree->product_excess},
                             {"direct_excess", r.squarefree->direct_excess},
                             {"primes_used", r.squarefree->primes_used},
                             {"tuples", r.squarefree->tuples},
                             {"violations_sampled", r.squarefree->violations_sampled}};
  }
  j["grid"] = r.grid ? json{{"step", r.grid->step}, {"t_min", r.grid->start}, {"t_max", r.grid->end()},
                            {"points", r.grid->size()}}
                     : json(nullptr);
  j["tolerances"] = r.tolerances;
  json audits = json::object();
  for (const auto& a : r.audits) audits[a.name] = audit_json(a);
  j["audits"] = audits;
  j["all_pass"] = r.all_pass();
  return j;
}

void write_audit_csv(std::ostream& out, const std::vector<Audit>& audits) {
  out << "name,lhs,rhs,pass,slack_log\n";
  const auto old = out.precision(17);
  for (const auto& a : audits)
    out << a.name << ',' << a.lhs << ',' << a.rhs << ',' << (a.pass ? "true" : "false") << ',' << a.slack_log
        << '\n';
  out.precision(old);
}

MomentReport run_pipeline(const ConstructionParams& params, const KernelSpec& spec, const PipelineOptions& options,
                          RunConfig config) {
  MomentReport r;
  r.config = std::move(config);
  r.params = params;
  r.tolerances = {{"step", options.step},
                  {"holder_rel_tol", 1e-12},
                  {"lemma2_cap_rel_tol", 1e-3},
                  {"identity_rel_tol", 1e-9},
                  {"kernel_table_tail", 1e-15}};
  const Kernel kernel(spec);

  if (options.lemma2) {
    for (std::size_t l = 1; l <= params.active_A; ++l) r.lemma2.push_back(lemma2_bound(params, kernel, PolySide::A, l, options.step));
    for (std::size_t l = 1; l <= params.active_B; ++l) r.lemma2.push_back(lemma2_bound(params, kernel, PolySide::B, l, options.step));
    for (const auto& v : r.lemma2) r.add(v.audits);
  }

  const bool need_I = options.diagonal || options.theorem;
  std::optional<AlphaBeta> coefficients;
  if (need_I || options.lemma1) coefficients = build_alpha_beta(params);
  if (need_I) {
    r.diagonal = diagonal_I(params, kernel, *coefficients);
    const IntegrandSamples samples = sample_integrand(params, kernel, options.step);
    r.grid = samples.grid;
    IOptions io;
    io.truncated_quadrature = options.truncated_quadrature;
    r.I = compute_I(params, kernel, samples, *coefficients, io);
    r.add(diagonal_model_audits(params, kernel, *r.I, *r.diagonal));
    r.holder = holder_chain(params, samples);
    r.add(r.holder->audits);
  }
  if (options.lemma1) {
    const double mass = r.diagonal ? r.diagonal->mass : diagonal_I(params, kernel, *coefficients).mass;
    r.lemma1 = lemma1_lower(params, kernel, mass);
    r.add(r.lemma1->audits);
    r.squarefree = squarefree_lower_check(params, options.squarefree_samples, options.seed);
    r.add(r.squarefree->audits);
  }
  if (options.theorem) {
    r.M_k = moment_Mk(params.k_value, params.T, options.step);
    r.theorem = theorem_bound(params, r.M_k->value, std::abs(r.I->value));
    r.add(r.theorem->audits);
  }
  return r;
}

}  // namespace zmoments
