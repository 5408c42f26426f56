#pragma once
// JSON forms for everything the command-line tools read or emit. Complex
// scalars serialize as two-element [re, im] arrays and polynomials as
// ascending coefficient arrays; composite objects use a fixed key order so a
// fixed config and seed reproduce byte-identical output.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <mslab/blaschke.hpp>
#include <mslab/crofoot.hpp>
#include <mslab/model_space.hpp>
#include <mslab/nearly_invariant.hpp>
#include <mslab/operators.hpp>
#include <mslab/spectral.hpp>

namespace mslab {

using json = nlohmann::ordered_json;

inline json parse_json_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("malformed JSON input");
  return j;
}

inline json complex_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError("complex value must be a two-element [re, im] array");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json poly_json(const ComplexPoly& p) {
  json out = json::array();
  for (const cplx& c : p.coeffs()) out.push_back(complex_json(c));
  return out;
}

inline ComplexPoly poly_from_json(const json& j) {
  if (!j.is_array()) throw ConfigError("polynomial must be an array of [re, im] coefficients");
  std::vector<cplx> coeffs;
  for (const json& e : j) coeffs.push_back(complex_from_json(e));
  return ComplexPoly(std::move(coeffs));
}

inline json rational_json(const RationalFn& f) {
  return json{{"num", poly_json(f.num())}, {"den", poly_json(f.den())}};
}

inline RationalFn rational_from_json(const json& j) {
  if (!j.is_object() || !j.contains("num") || !j.contains("den"))
    throw ConfigError("rational function must be an object with num and den arrays");
  return RationalFn(poly_from_json(j["num"]), poly_from_json(j["den"]));
}

inline json blaschke_json(const BlaschkeProduct& b) {
  json zs = json::array();
  for (const auto& zr : b.zeros())
    zs.push_back(json{{"point", complex_json(zr.point)}, {"mult", zr.mult}});
  return json{{"constant", complex_json(b.constant())}, {"zeros", std::move(zs)}};
}

inline BlaschkeProduct blaschke_from_json(const json& j) {
  if (!j.is_object() || !j.contains("zeros") || !j["zeros"].is_array())
    throw ConfigError("blaschke product must be an object with a zeros array");
  cplx constant(1.0);
  if (j.contains("constant")) constant = complex_from_json(j["constant"]);
  std::vector<BlaschkeZero> zs;
  for (const json& e : j["zeros"]) {
    if (!e.is_object() || !e.contains("point") || !e.contains("mult") ||
        !e["mult"].is_number_integer())
      throw ConfigError("blaschke zero must be an object with point and integer mult");
    zs.push_back({complex_from_json(e["point"]), e["mult"].get<int>()});
  }
  return BlaschkeProduct(constant, std::move(zs));
}

inline json zero_order_json(const std::vector<cplx>& order) {
  json out = json::array();
  for (const cplx& z : order) out.push_back(complex_json(z));
  return out;
}

inline std::vector<cplx> zero_order_from_json(const json& j) {
  if (!j.is_array()) throw ConfigError("zero_order must be an array of [re, im] points");
  std::vector<cplx> out;
  for (const json& e : j) out.push_back(complex_from_json(e));
  return out;
}

inline json model_space_json(const std::string& space_id, const ModelSpace& ms) {
  return json{{"space_id", space_id},
              {"theta", blaschke_json(ms.theta())},
              {"zero_order", zero_order_json(ms.zero_order())}};
}

inline json model_vector_json(const std::string& space_id, const ModelVector& x) {
  json coeffs = json::array();
  for (int k = 0; k < x.size(); ++k) coeffs.push_back(complex_json(x(k)));
  return json{{"space_id", space_id}, {"coeffs", std::move(coeffs)}};
}

inline std::pair<std::string, ModelVector> model_vector_from_json(const json& j) {
  if (!j.is_object() || !j.contains("space_id") || !j["space_id"].is_string() ||
      !j.contains("coeffs") || !j["coeffs"].is_array())
    throw ConfigError("model vector must be an object with space_id and coeffs");
  const auto& cs = j["coeffs"];
  ModelVector x(cs.size());
  for (size_t k = 0; k < cs.size(); ++k) x(static_cast<long>(k)) = complex_from_json(cs[k]);
  return {j["space_id"].get<std::string>(), std::move(x)};
}

// Row-major entries plus the basis metadata that gives them meaning.
inline json matrix_json(const OperatorMatrix& m, const std::string& space_id,
                        const std::string& basis_label) {
  json entries = json::array();
  for (long r = 0; r < m.rows(); ++r)
    for (long c = 0; c < m.cols(); ++c) entries.push_back(complex_json(m(r, c)));
  return json{{"space_id", space_id},
              {"basis", basis_label},
              {"rows", m.rows()},
              {"cols", m.cols()},
              {"entries", std::move(entries)}};
}

inline json nearly_space_json(const NearlySpace& ns) {
  return json{{"h", rational_json(ns.h())},
              {"theta", blaschke_json(ns.space().theta())},
              {"zero_order", zero_order_json(ns.space().zero_order())}};
}

inline json spectral_report_json(const SpectralReport& report) {
  json evs = json::array();
  for (const auto& ev : report.eigenvalues)
    evs.push_back(json{{"lambda", complex_json(ev.lambda)}, {"mult", ev.multiplicity}});
  json essential = json::array();
  for (const cplx& z : report.essential) essential.push_back(complex_json(z));
  json notes = json::array();
  for (const std::string& n : report.notes) notes.push_back(n);
  return json{{"eigenvalues", std::move(evs)},
              {"essential", std::move(essential)},
              {"notes", std::move(notes)}};
}

inline json lattice_json(const std::vector<InvariantSubspace>& lattice) {
  json out = json::array();
  for (const auto& sub : lattice) {
    json basis = json::array();
    for (const auto& f : sub.basis_fns) basis.push_back(rational_json(f));
    out.push_back(json{{"phi", blaschke_json(sub.phi)},
                       {"dim", sub.dim},
                       {"basis", std::move(basis)},
                       {"residual", sub.residual}});
  }
  return out;
}

// Input side of the tools: the subspace description plus tolerance and output
// knobs. The level value is always computed from the input, never read.
struct AnalysisConfig {
  std::optional<RationalFn> h;
  std::vector<RationalFn> span;
  std::optional<BlaschkeProduct> theta;
  std::vector<cplx> zero_order;
  double verify_tol = 1e-9;
  int quad_max = 65536;
  double cluster_tol = 1e-6;
  std::string format = "json";
  std::uint64_t seed = 1;

  NumericOptions options() const {
    NumericOptions opts = default_options();
    opts.verify_tol = verify_tol;
    opts.quad_max_nodes = quad_max;
    opts.cluster_tol = cluster_tol;
    return opts;
  }
};

inline AnalysisConfig analysis_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  AnalysisConfig cfg;
  if (j.contains("h") && j.contains("span"))
    throw ConfigError("config may give h (rational) or span (list of rationals), not both");
  if (j.contains("h")) cfg.h = rational_from_json(j["h"]);
  if (j.contains("span")) {
    if (!j["span"].is_array() || j["span"].empty())
      throw ConfigError("span must be a nonempty array of rational functions");
    for (const json& e : j["span"]) cfg.span.push_back(rational_from_json(e));
  }
  if (j.contains("theta")) cfg.theta = blaschke_from_json(j["theta"]);
  if (j.contains("zero_order")) cfg.zero_order = zero_order_from_json(j["zero_order"]);
  if (j.contains("verify_tol")) {
    if (!j["verify_tol"].is_number() || j["verify_tol"].get<double>() <= 0.0)
      throw ConfigError("verify_tol must be positive");
    cfg.verify_tol = j["verify_tol"].get<double>();
  }
  if (j.contains("cluster_tol")) {
    if (!j["cluster_tol"].is_number() || j["cluster_tol"].get<double>() <= 0.0)
      throw ConfigError("cluster_tol must be positive");
    cfg.cluster_tol = j["cluster_tol"].get<double>();
  }
  if (j.contains("quad_max")) {
    if (!j["quad_max"].is_number_integer())
      throw ConfigError("quad_max must be an integer power of two >= 256");
    cfg.quad_max = j["quad_max"].get<int>();
  }
  if (cfg.quad_max < 256 || (cfg.quad_max & (cfg.quad_max - 1)) != 0)
    throw ConfigError("quad_max must be an integer power of two >= 256");
  if (j.contains("format")) {
    if (!j["format"].is_string()) throw ConfigError("format must be \"json\" or \"text\"");
    cfg.format = j["format"].get<std::string>();
    if (cfg.format != "json" && cfg.format != "text")
      throw ConfigError("format must be \"json\" or \"text\"");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) throw ConfigError("seed must be an integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  return cfg;
}

// Builds the configured space: an explicit extremal function is validated
// directly, a span is run through the extremal solve first. Either way theta
// must be given explicitly when h is; with a span it is required too, since
// recovering an inner factor from span data alone is a separate inverse
// problem the tools do not solve.
inline NearlySpace nearly_space_from_config(const AnalysisConfig& cfg) {
  if (!cfg.theta.has_value()) throw ConfigError("config is missing theta");
  if (!cfg.h.has_value() && cfg.span.empty())
    throw ConfigError("config needs h (rational) or span (list of rationals)");
  const NumericOptions opts = cfg.options();
  RationalFn h;
  if (cfg.h.has_value()) {
    h = *cfg.h;
  } else {
    h = extremal_from_span(cfg.span, opts).first;
  }
  if (cfg.zero_order.empty()) return make_nearly_space(h, *cfg.theta, opts);
  return make_nearly_space(h, tm_basis(*cfg.theta, cfg.zero_order, opts), opts);
}

}  // namespace mslab
