#include "ultrajet/cli/report.hpp"

#include <cmath>
#include <cstdio>

namespace ultrajet::cli {

namespace {

void dump_number(double v, std::string& out) {
  if (std::isnan(v)) {
    out += "\"nan\"";
  } else if (std::isinf(v)) {
    out += v > 0 ? "\"inf\"" : "\"-inf\"";
  } else {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
    // keep floats recognisable as floats after a round trip
    std::string_view s(buf);
    if (s.find_first_of(".eE") == std::string_view::npos) out += ".0";
  }
}

void dump_into(const json& j, int indent, int depth, std::string& out) {
  auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::number_float:
      dump_number(j.get<double>(), out);
      return;
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump_into(it.value(), indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // arrays of scalars stay on one line
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat && indent >= 0 ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        dump_into(e, indent, depth + 1, out);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    default:
      out += j.dump();
  }
}

json witness_json(const std::optional<Witness>& w) {
  if (!w) return nullptr;
  return json{{"j", w->j}, {"k", w->k}};
}

json bracket_json(const Bracket& b) { return json{{"lower", b.lower}, {"upper", b.upper}}; }

template <class T>
json jet_coefficients(const Jet<T>& j) {
  json out = json::array();
  const MonomialBasis& b = j.basis();
  for (int c = 0; c < j.m(); ++c)
    for (std::size_t p = 0; p < j.size(); ++p) {
      const T& v = j.at(c, p);
      if (v == 0) continue;
      json e{{"component", c}, {"index", b.index(p).values()}};
      if constexpr (std::is_same_v<T, Rational>) {
        e["exact"] = to_string(v);
        e["value"] = to_double(v);
      } else {
        e["value"] = v;
      }
      out.push_back(std::move(e));
    }
  return out;
}

}  // namespace

std::string dump(const json& j, int indent) {
  std::string out;
  dump_into(j, indent, 0, out);
  return out;
}

json rational_json(const Rational& q) { return json{{"exact", to_string(q)}, {"value", to_double(q)}}; }

json to_json(const PropertyVerdict& v) {
  return json{{"property", to_string(v.property)},
              {"horizon", v.horizon},
              {"holds", v.holds_up_to_K},
              {"witness", witness_json(v.witness)},
              {"constant_estimate", optional_json(v.constant_estimate)},
              {"stabilized", v.stabilized},
              {"running_estimates", v.running_estimates}};
}

json to_json(const PartialSumsReport& r) {
  return json{{"trend", to_string(r.trend)},
              {"tail_slope", r.tail_slope},
              {"last", r.partial_sums.empty() ? 0.0 : r.partial_sums.back()},
              {"partial_sums", r.partial_sums}};
}

json to_json(const SeminormReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) entries.push_back(json{{"index", e.index}, {"lower", e.value.lower}, {"upper", e.value.upper}});
  return json{{"family", to_string(r.family)},
              {"truncation", r.truncation},
              {"entries", std::move(entries)},
              {"norm", r.norm ? bracket_json(*r.norm) : json(nullptr)},
              {"finite_at_truncation", r.finite_at_truncation},
              {"support_ok", optional_json(r.support_ok)},
              {"support_radius", optional_json(r.support_radius)}};
}

json to_json(const TypeRadiusReport& r) {
  return json{{"rho_star", r.rho_star}, {"classification", to_string(r.classification)}, {"roots", r.roots}};
}

json to_json(const ExplawReport& r) {
  return json{{"family", to_string(r.family)},
              {"split", json{{"outer", r.split.outer}, {"inner", r.split.inner}}},
              {"K", r.K},
              {"rho1", r.rho1},
              {"rho2", r.rho2},
              {"rho", optional_json(r.rho)},
              {"rho_direction2", optional_json(r.rho_direction2)},
              {"tau_used", optional_json(r.tau_used)},
              {"mixed_norm", optional_json(r.mixed_norm)},
              {"joint_norm", optional_json(r.joint_norm)},
              {"direction1_ok", r.direction1_ok},
              {"direction2_ok", r.direction2_ok},
              {"direction1_ratio", r.direction1_ratio},
              {"direction2_ratio", r.direction2_ratio},
              {"direction1_witness", optional_json(r.direction1_witness)},
              {"direction2_witness", optional_json(r.direction2_witness)},
              {"comparisons", r.comparisons},
              {"fubini_discrepancy", optional_json(r.fubini_discrepancy)},
              {"support_product_ok", optional_json(r.support_product_ok)}};
}

json to_json(const CounterexampleRun& r) {
  json pairs = json::array();
  for (const auto& p : r.pairs)
    pairs.push_back(json{{"n", p.n}, {"j", p.j}, {"k", p.k}, {"log_ratio", p.log_ratio}, {"log_needed", p.log_needed}});
  return json{{"M", r.M.to_string()},
              {"L", r.L.to_string()},
              {"sigma_set", r.sigma_set},
              {"pairs", std::move(pairs)},
              {"lower_bounds", r.lower_bounds},
              {"log_lower_bounds", r.log_lower_bounds},
              {"log_functional_sum", r.log_functional_sum},
              {"log_single_term", r.log_single_term},
              {"log_after_pair_bound", r.log_after_pair_bound},
              {"log_h", r.log_h},
              {"chain_ok", r.chain_ok},
              {"monotone", r.monotone},
              {"strictly_increasing_from_2", r.strictly_increasing_from_2}};
}

json to_json(const KitSweep& s) {
  return json{{"case", to_string(s.kase)},
              {"trials", s.trials},
              {"failures", s.failures},
              {"first_failure", optional_json(s.first_failure)},
              {"exact", s.all_exact}};
}

json to_json(const ClassTag& t) {
  return json{{"order", t.order},
              {"bounded", t.bounded},
              {"schwartz", t.schwartz},
              {"compact", t.compact},
              {"decay_ratio", t.decay_ratio}};
}

json to_json(const BoundCertificate& c) {
  return json{{"C", c.C},
              {"rho", c.rho},
              {"M", c.M.to_string()},
              {"from_order", c.from_order},
              {"K", c.K},
              {"worst_ratio", c.worst_ratio}};
}

json to_json(const ComposedCertificate& c) {
  return json{{"certificate", to_json(c.cert)},
              {"f_certificate", to_json(c.f_used)},
              {"g_certificate", to_json(c.g_used)},
              {"M1", c.M1},
              {"sigma", optional_json(c.sigma)},
              {"bound_values", c.bound_values},
              {"projective", c.projective ? to_json(*c.projective) : json(nullptr)},
              {"measured_ratio", optional_json(c.measured_ratio)},
              {"majorizes", optional_json(c.majorizes)}};
}

json to_json(const InverseBoundTable& t) {
  return json{{"F1_bound", t.F1_bound},
              {"T_bound", t.T_bound},
              {"theta", t.theta},
              {"beta", t.beta},
              {"b", t.b},
              {"C_fit", t.C_fit},
              {"rho_fit", t.rho_fit}};
}

json to_json(const MatrixInverseBound& b) { return json{{"lhs", b.lhs}, {"rhs", b.rhs}, {"holds", b.holds}}; }

json jet_json(const Jet<double>& j) { return jet_coefficients(j); }
json jet_json(const Jet<Rational>& j) { return jet_coefficients(j); }

}  // namespace ultrajet::cli
