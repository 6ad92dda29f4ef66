#include "scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "qrf/crossed.hpp"
#include "qrf/frames.hpp"
#include "qrf/relativise.hpp"
#include "qrf/scheme.hpp"
#include "qrf/typecond.hpp"
#include "qrf/vnalg.hpp"

namespace qrflab {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

json strip_timing(json report) {
  if (report.is_object()) {
    report.erase("elapsed_ms");
    for (auto& [k, v] : report.items()) v = strip_timing(v);
  } else if (report.is_array()) {
    for (auto& v : report) v = strip_timing(v);
  }
  return report;
}

std::string report_text(const json& report) { return report.dump(2) + "\n"; }

namespace {

using namespace qrf;

// ---------------------------------------------------------------------------
// Literals

json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

double real_of(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw ConfigError(where + ": expected a number or \"inf\"/\"-inf\"");
}

int int_of(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<int>();
}

Complex complex_of(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError(where + ": expected a real number or a [re, im] pair");
}

Operator matrix_of(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw ConfigError(where + ": expected a matrix (array of rows)");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  if (rows != cols) throw ConfigError(where + ": matrix must be square");
  Operator m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols)
      throw ConfigError(where + ": ragged matrix row " + std::to_string(r));
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = complex_of(j[r][c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return m;
}

Vector vector_of(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a nonempty vector");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(Eigen::Index(i)) = complex_of(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

Interval interval_of(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(where + ": expected an interval [a, b]");
  const Interval iv{real_of(j[0], where + "[0]"), real_of(j[1], where + "[1]")};
  if (!(iv.a < iv.b)) throw ConfigError(where + ": interval needs a < b");
  return iv;
}

std::vector<Interval> intervals_of(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected a list of intervals");
  std::vector<Interval> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(interval_of(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Weight weight_of(const json& j, const std::string& where) {
  if (j.is_string() && (j == "inf" || j == "INFINITE")) return Weight::unbounded();
  if (j.is_number_integer() && j.get<long long>() >= 0) return Weight::finite(j.get<std::uint64_t>());
  throw ConfigError(where + ": weight must be a nonnegative integer or \"inf\"");
}

json matrix_json(const Operator& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(json::array({num(m(r, c).real()), num(m(r, c).imag())}));
    rows.push_back(row);
  }
  return rows;
}

json interval_json(const Interval& iv) { return json::array({num(iv.a), num(iv.b)}); }

json multiplicity_json(const std::vector<MultiplicityTerm>& terms) {
  json out = json::array();
  for (const auto& t : terms)
    out.push_back({{"weight", t.weight.infinite ? json("inf") : json(t.weight.count)}, {"interval", interval_json(t.interval)}});
  return out;
}

const json& member(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  return obj.at(key);
}

DensityState random_density(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Operator x(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = Complex(n01(rng), n01(rng));
  const Operator rho = x * x.adjoint();
  return DensityState(rho / rho.trace().real());
}

// ---------------------------------------------------------------------------
// Named blocks, built on first use so definition order does not matter.

class Blocks {
 public:
  explicit Blocks(const json& cfg) : cfg_(cfg) {
    for (const char* kind : {"groups", "representations", "algebras", "operators", "states", "frames", "schemes"})
      if (cfg_.contains(kind) && !cfg_[kind].is_object())
        throw ConfigError(std::string(kind) + ": block must be an object of named entries");
  }

  const SymmetryGroup& group(const std::string& name) { return get(groups_, "groups", name, [&](const json& j, const std::string& w) { return build_group(j, w); }); }
  const UnitaryRep& rep(const std::string& name) { return get(reps_, "representations", name, [&](const json& j, const std::string& w) { return build_rep(j, w); }); }
  const OperatorAlgebra& algebra(const std::string& name) { return get(algebras_, "algebras", name, [&](const json& j, const std::string& w) { return build_algebra(j, w); }); }
  const QuantumReferenceFrame& frame(const std::string& name) { return get(frames_, "frames", name, [&](const json& j, const std::string& w) { return build_frame(j, w); }); }
  const MeasurementScheme& scheme(const std::string& name) { return get(schemes_, "schemes", name, [&](const json& j, const std::string& w) { return build_scheme(j, w); }); }
  const Operator& named_operator(const std::string& name) { return get(operators_, "operators", name, [&](const json& j, const std::string& w) { return op(j, w); }); }
  const DensityState& named_state(const std::string& name) { return get(states_, "states", name, [&](const json& j, const std::string& w) { return state(j, w); }); }

  /// Operator literal, a builtin name, {"identity": n}, or a reference into "operators".
  Operator op(const json& j, const std::string& where) {
    if (j.is_string()) {
      const std::string s = j.get<std::string>();
      if (has("operators", s)) return named_operator(s);
      if (s == "I2") return identity(2);
      if (s == "X") return pauli_x();
      if (s == "Y") return pauli_y();
      if (s == "Z") return pauli_z();
      if (s == "CNOT") return cnot_system_control();
      if (s == "SWAP") return swap_operator(2, 2);
      throw ConfigError(where + ": unknown operator '" + s + "'");
    }
    if (j.is_object() && j.contains("identity")) return identity(int_of(j["identity"], where + ".identity"));
    if (j.is_object() && j.contains("diag")) {
      std::vector<Complex> d;
      for (std::size_t i = 0; i < j["diag"].size(); ++i) d.push_back(complex_of(j["diag"][i], where + ".diag"));
      return diag(d);
    }
    return matrix_of(j, where);
  }

  /// State literal (density matrix), a spec object, or a reference into "states".
  DensityState state(const json& j, const std::string& where) {
    if (j.is_string()) {
      const std::string s = j.get<std::string>();
      if (!has("states", s)) throw ConfigError(where + ": unknown state '" + s + "'");
      return named_state(s);
    }
    try {
      if (j.is_array()) return DensityState(matrix_of(j, where));
      if (!j.is_object()) throw ConfigError(where + ": expected a state");
      if (j.contains("density")) return DensityState(op(j["density"], where + ".density"));
      if (j.contains("pure")) {
        Vector v = vector_of(j["pure"], where + ".pure");
        if (v.norm() == 0.0) throw ConfigError(where + ".pure: zero vector");
        return DensityState::pure(v / v.norm());
      }
      if (j.contains("mixed")) return DensityState::maximally_mixed(int_of(j["mixed"], where + ".mixed"));
      if (j.contains("basis")) {
        const json& b = j["basis"];
        if (!b.is_array() || b.size() != 2) throw ConfigError(where + ".basis: expected [dim, index]");
        return DensityState::basis_state(int_of(b[0], where + ".basis"), int_of(b[1], where + ".basis"));
      }
      if (j.contains("probabilities")) {
        std::vector<double> p;
        for (const auto& x : j["probabilities"]) p.push_back(real_of(x, where + ".probabilities"));
        return DensityState(diag_real(p));
      }
      if (j.contains("gibbs")) {
        const json& g = j["gibbs"];
        return gibbs_state(op(member(g, "hamiltonian", where + ".gibbs"), where + ".gibbs.hamiltonian"),
                           real_of(member(g, "beta", where + ".gibbs"), where + ".gibbs.beta"));
      }
    } catch (const qrf::Error& e) {
      throw ConfigError(where + ": " + e.what());
    }
    throw ConfigError(where + ": unknown state form");
  }

  bool has(const std::string& kind, const std::string& name) const {
    return cfg_.contains(kind) && cfg_[kind].contains(name);
  }

  /// Named blocks consulted so far, with their transitive dependencies.
  std::set<std::string>& touched() { return touched_; }
  const json& definition(const std::string& key) const {
    const auto dot = key.find('.');
    return cfg_[key.substr(0, dot)][key.substr(dot + 1)];
  }

 private:
  template <class T, class Build>
  const T& get(std::map<std::string, T>& cache, const char* kind, const std::string& name, Build build) {
    const std::string key = std::string(kind) + "." + name;
    touched_.insert(key);
    if (auto it = cache.find(name); it != cache.end()) return it->second;
    if (!has(kind, name)) throw ConfigError(std::string(kind) + ": unresolved reference '" + name + "'");
    if (building_.count(key)) throw ConfigError(key + ": circular reference");
    building_.insert(key);
    try {
      T value = build(cfg_[kind][name], key);
      building_.erase(key);
      return cache.emplace(name, std::move(value)).first->second;
    } catch (const qrf::Error& e) {
      building_.erase(key);
      throw ConfigError(key + ": " + e.what());
    } catch (...) {
      building_.erase(key);
      throw;
    }
  }

  std::string ref(const json& j, const std::string& where) {
    if (!j.is_string()) throw ConfigError(where + ": expected a block name");
    return j.get<std::string>();
  }

  SymmetryGroup build_group(const json& j, const std::string& w) {
    const std::string kind = member(j, "kind", w).get<std::string>();
    if (kind == "cyclic") return SymmetryGroup::cyclic(int_of(member(j, "order", w), w + ".order"));
    if (kind == "dihedral") return SymmetryGroup::dihedral(int_of(member(j, "n", w), w + ".n"));
    if (kind == "symmetric") return SymmetryGroup::symmetric(int_of(member(j, "n", w), w + ".n"));
    if (kind == "trivial") return SymmetryGroup::trivial();
    if (kind == "circle") return SymmetryGroup::circle(int_of(member(j, "bandwidth", w), w + ".bandwidth"));
    if (kind == "cayley") {
      std::vector<std::vector<int>> table;
      for (const auto& row : member(j, "table", w)) {
        std::vector<int> r;
        for (const auto& x : row) r.push_back(int_of(x, w + ".table"));
        table.push_back(r);
      }
      std::vector<std::string> names;
      if (j.contains("names"))
        for (const auto& n : j["names"]) names.push_back(n.get<std::string>());
      return SymmetryGroup::from_cayley(table, names);
    }
    if (kind == "product") {
      const json& f = member(j, "factors", w);
      if (!f.is_array() || f.size() != 2) throw ConfigError(w + ".factors: expected two group names");
      return SymmetryGroup::direct_product(group(ref(f[0], w + ".factors")), group(ref(f[1], w + ".factors")));
    }
    throw ConfigError(w + ": unknown group kind '" + kind + "'");
  }

  UnitaryRep build_rep(const json& j, const std::string& w) {
    const std::string kind = j.value("kind", std::string("matrices"));
    if (kind == "tensor") {
      const json& f = member(j, "factors", w);
      if (!f.is_array() || f.size() != 2) throw ConfigError(w + ".factors: expected two representation names");
      return tensor_rep(rep(ref(f[0], w + ".factors")), rep(ref(f[1], w + ".factors")));
    }
    const SymmetryGroup& g = group(ref(member(j, "group", w), w + ".group"));
    if (kind == "regular") return regular_representation(g);
    if (kind == "trivial") return UnitaryRep::trivial(g, int_of(member(j, "dim", w), w + ".dim"));
    if (kind == "generator") return UnitaryRep(g, op(member(j, "generator", w), w + ".generator"));
    if (kind == "shift") {
      // ℤ_n shifting basis vectors of ℂ^points cyclically.
      const int points = int_of(member(j, "points", w), w + ".points");
      std::vector<Operator> m;
      for (int x = 0; x < g.order(); ++x) {
        Operator u = zeros(points);
        for (int v = 0; v < points; ++v) u((v + x) % points, v) = 1.0;
        m.push_back(u);
      }
      return UnitaryRep(g, m);
    }
    if (kind == "matrices") {
      std::vector<Operator> m;
      const json& mats = member(j, "matrices", w);
      for (std::size_t i = 0; i < mats.size(); ++i) m.push_back(op(mats[i], w + ".matrices[" + std::to_string(i) + "]"));
      return UnitaryRep(g, m);
    }
    throw ConfigError(w + ": unknown representation kind '" + kind + "'");
  }

  OperatorAlgebra build_algebra(const json& j, const std::string& w) {
    const std::string kind = j.value("kind", std::string("generated"));
    if (kind == "full") return OperatorAlgebra::full(int_of(member(j, "dim", w), w + ".dim"));
    if (kind == "scalars") return OperatorAlgebra::scalars(int_of(member(j, "dim", w), w + ".dim"));
    if (kind == "diagonal") {
      const int d = int_of(member(j, "dim", w), w + ".dim");
      std::vector<double> e(d);
      for (int i = 0; i < d; ++i) e[i] = i + 1.0;
      return generate_algebra({diag_real(e)}, d);
    }
    if (kind == "tensor") {
      const json& f = member(j, "factors", w);
      if (!f.is_array() || f.size() != 2) throw ConfigError(w + ".factors: expected two algebra names");
      return tensor_algebra(algebra(ref(f[0], w + ".factors")), algebra(ref(f[1], w + ".factors")));
    }
    if (kind == "generated") {
      const int d = int_of(member(j, "dim", w), w + ".dim");
      std::vector<Operator> gens;
      const json& g = member(j, "generators", w);
      for (std::size_t i = 0; i < g.size(); ++i) {
        Operator x = op(g[i], w + ".generators[" + std::to_string(i) + "]");
        if (x.rows() != d) throw ConfigError(w + ".generators[" + std::to_string(i) + "]: dimension mismatch");
        gens.push_back(std::move(x));
      }
      return generate_algebra(gens, d);
    }
    throw ConfigError(w + ": unknown algebra kind '" + kind + "'");
  }

  QuantumReferenceFrame build_frame(const json& j, const std::string& w) {
    const UnitaryRep& u = rep(ref(member(j, "representation", w), w + ".representation"));
    const std::string kind = j.value("kind", std::string("effects"));
    if (kind == "phase") {
      const int cells = int_of(member(j, "arcs", w), w + ".arcs");
      const Operator c = j.contains("c") ? op(j["c"], w + ".c") : Operator(Operator::Ones(u.dim(), u.dim()));
      return QuantumReferenceFrame(u, phase_povm(u.dim(), c, ValueSpace::uniform_arcs(cells)));
    }
    const SymmetryGroup& g = u.group();
    if (!g.is_finite()) throw ConfigError(w + ": circle frames use kind \"phase\"");
    std::vector<int> sub{g.identity_index()};
    if (j.contains("subgroup")) {
      sub.clear();
      for (const auto& x : j["subgroup"]) sub.push_back(int_of(x, w + ".subgroup"));
    }
    const HomogeneousSpace space(g, sub);
    std::vector<Operator> eff;
    if (kind == "ideal") {
      if (!space.is_principal() || u.dim() != g.order())
        throw ConfigError(w + ": ideal frames need the regular representation and a principal value space");
      for (int x = 0; x < g.order(); ++x) eff.push_back(ket_bra(g.order(), x, x));
    } else if (kind == "effects") {
      const json& e = member(j, "effects", w);
      for (std::size_t i = 0; i < e.size(); ++i) eff.push_back(op(e[i], w + ".effects[" + std::to_string(i) + "]"));
    } else {
      throw ConfigError(w + ": unknown frame kind '" + kind + "'");
    }
    return QuantumReferenceFrame(u, Povm(ValueSpace::points(space), eff));
  }

  MeasurementScheme build_scheme(const json& j, const std::string& w) {
    const int ds = int_of(member(j, "system_dim", w), w + ".system_dim");
    const int dp = int_of(member(j, "probe_dim", w), w + ".probe_dim");
    const json& s = member(j, "scattering", w);
    const Operator scattering = s == "IDENTITY" ? identity(ds * dp) : op(s, w + ".scattering");
    return MeasurementScheme(ds, dp, scattering, state(member(j, "probe_state", w), w + ".probe_state"),
                             op(member(j, "probe_observable", w), w + ".probe_observable"));
  }

  const json& cfg_;
  std::map<std::string, SymmetryGroup> groups_;
  std::map<std::string, UnitaryRep> reps_;
  std::map<std::string, OperatorAlgebra> algebras_;
  std::map<std::string, QuantumReferenceFrame> frames_;
  std::map<std::string, MeasurementScheme> schemes_;
  std::map<std::string, Operator> operators_;
  std::map<std::string, DensityState> states_;
  std::set<std::string> building_;
  std::set<std::string> touched_;
};

// ---------------------------------------------------------------------------
// Tasks

struct Task {
  const json& spec;
  std::string where;
  Blocks& blocks;
  const RunOptions& options;
  std::mt19937_64 rng;
  json outputs = json::object();
  json defects = json::object();
  json checks = json::array();
  std::vector<std::vector<std::string>> verdict_rows = {};
  std::vector<std::vector<std::string>> residual_rows = {};

  const json& arg(const std::string& key) const { return member(spec, key, where); }
  bool has(const std::string& key) const { return spec.contains(key); }
  const json* expect(const std::string& key) const {
    if (!spec.contains("expect") || !spec["expect"].contains(key)) return nullptr;
    return &spec["expect"][key];
  }

  double tol(double fallback) const {
    if (spec.contains("tolerance")) return real_of(spec["tolerance"], where + ".tolerance");
    if (options.tolerance) return *options.tolerance;
    return fallback;
  }

  void record(const std::string& name, double value, const std::string& relation, double bound, bool ok) {
    defects[name] = num(value);
    checks.push_back({{"name", name}, {"relation", relation}, {"bound", num(bound)}, {"passed", ok}});
  }
  void at_most(const std::string& name, double value, double default_tol) {
    const double t = tol(default_tol);
    record(name, value, "<=", t, value <= t);
  }
  void at_least(const std::string& name, double value, double bound) { record(name, value, ">=", bound, value >= bound); }
  void holds(const std::string& name, bool ok) {
    checks.push_back({{"name", name}, {"relation", "holds"}, {"passed", ok}});
  }
  /// Compares with expect[key] when present.
  void expect_close(const std::string& key, double got, double default_tol) {
    const json* e = expect(key);
    if (!e) return;
    const double want = real_of(*e, where + ".expect." + key);
    const json& ex = spec["expect"];
    const double t = ex.contains("abs_tol") ? real_of(ex["abs_tol"], where + ".expect.abs_tol") : tol(default_tol);
    if (std::isinf(want)) {
      holds(key + " = " + fmt(want), got == want);
      return;
    }
    record(key + " error", std::abs(got - want), "<=", t, std::abs(got - want) <= t);
  }
  void expect_verdict(Verdict v) {
    if (const json* e = expect("verdict")) holds(std::string("verdict ") + e->get<std::string>(), *e == to_string(v));
  }

  GroupAction action() {
    const OperatorAlgebra& a = blocks.algebra(ref("algebra"));
    const UnitaryRep& u = blocks.rep(ref("representation"));
    try {
      return GroupAction(a, u);
    } catch (const qrf::Error& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  std::string ref(const std::string& key) const {
    const json& j = arg(key);
    if (!j.is_string()) throw ConfigError(where + "." + key + ": expected a block name");
    return j.get<std::string>();
  }
  double beta() const { return real_of(arg("beta"), where + ".beta"); }
};

SpectralMultiplicity multiplicity_of(const json& j, const std::string& where) {
  if (j.is_object()) {
    const Weight w = j.contains("weight") ? weight_of(j["weight"], where + ".weight") : Weight::finite(1);
    return SpectralMultiplicity::indicator(intervals_of(member(j, "set", where), where + ".set"), w);
  }
  if (!j.is_array()) throw ConfigError(where + ": expected a list of terms or {\"set\": …}");
  std::vector<MultiplicityTerm> terms;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    terms.push_back({weight_of(member(j[i], "weight", w), w + ".weight"), interval_of(member(j[i], "interval", w), w + ".interval")});
  }
  return SpectralMultiplicity(terms);
}

void verdict_outputs(Task& t, const TypeVerdict& v) {
  t.outputs["verdict"] = to_string(v.value);
  t.outputs["description"] = describe(v.value);
  t.outputs["integral"] = num(v.integral);
  t.outputs["beta"] = num(v.beta);
  t.outputs["multiplicity"] = multiplicity_json(v.multiplicity);
  t.expect_verdict(v.value);
  t.expect_close("integral", v.integral, 1e-12);
  t.verdict_rows.push_back({to_string(v.value), fmt(v.integral), "", ""});
}

void op_type_condition(Task& t) {
  verdict_outputs(t, evaluate_condition(multiplicity_of(t.arg("multiplicity"), t.where + ".multiplicity"), t.beta()));
}

void op_desitter_example1(Task& t) {
  verdict_outputs(t, desitter_example1(intervals_of(t.arg("V"), t.where + ".V"), t.beta()));
}

void op_trace_of_band(Task& t) {
  const double tr = trace_of_band(intervals_of(t.arg("K"), t.where + ".K"));
  t.outputs["trace"] = num(tr);
  t.expect_close("trace", tr, 1e-12);
  if (t.has("multiplicity")) {
    const SpectralMultiplicity m = multiplicity_of(t.arg("multiplicity"), t.where + ".multiplicity");
    const double b = t.beta();
    const TypeVerdict v = evaluate_condition(m, b);
    const double r = rescaled_trace(m, b);
    t.outputs["integral"] = num(v.integral);
    t.outputs["rescaled_trace"] = num(r);
    t.expect_close("rescaled_trace", r, 1e-12);
    if (v.value == Verdict::finite) t.holds("rescaled trace = beta * integral", r == b * v.integral);
  }
}

std::vector<Step> steps_of(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected a list of steps");
  std::vector<Step> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    out.push_back({real_of(member(j[i], "value", w), w + ".value"), interval_of(member(j[i], "interval", w), w + ".interval")});
  }
  return out;
}

void op_kms_weight(Task& t) {
  const std::vector<Step> f = steps_of(t.arg("f"), t.where + ".f");
  const SpectralMultiplicity m = multiplicity_of(t.arg("multiplicity"), t.where + ".multiplicity");
  const double b = t.beta();
  const double w = kms_weight_on_Ef(f, m, b);
  t.outputs["l1_norm"] = num(l1_norm(f));
  t.outputs["integral"] = num(evaluate_condition(m, b).integral);
  t.outputs["weight"] = num(w);
  t.expect_close("weight", w, 1e-12);
}

void op_so3_partition(Task& t) {
  const json& e = t.arg("energies");
  const std::string w = t.where + ".energies";
  const double b = t.beta();
  SeriesPolicy policy;
  if (t.has("policy")) {
    const json& p = t.arg("policy");
    if (p.contains("target")) policy.target = real_of(p["target"], t.where + ".policy.target");
    if (p.contains("stall_window")) policy.stall_window = int_of(p["stall_window"], t.where + ".policy.stall_window");
    if (p.contains("l_max")) policy.l_max = int_of(p["l_max"], t.where + ".policy.l_max");
  }
  So3Partition p;
  if (e.contains("casimir")) {
    const double s = real_of(e["casimir"], w + ".casimir");
    p = so3_partition_multiplicity([s](int l) { return s * l * (l + 1.0); }, b, policy);
  } else if (e.contains("levels")) {
    std::vector<double> levels;
    for (std::size_t i = 0; i < e["levels"].size(); ++i) levels.push_back(real_of(e["levels"][i], w + ".levels"));
    p = so3_partition_multiplicity(levels, b, policy);
  } else if (e.contains("log_flat")) {
    p = so3_partition_multiplicity([b](int l) { return 2.0 / b * std::log(2.0 * l + 1.0); }, b, policy);
  } else {
    throw ConfigError(w + ": expected one of casimir, levels, log_flat");
  }
  t.outputs["verdict"] = to_string(p.verdict.value);
  t.outputs["description"] = describe(p.verdict.value);
  t.outputs["value"] = num(p.value);
  t.outputs["remainder_bound"] = num(p.remainder_bound);
  t.outputs["terms"] = p.terms;
  t.expect_verdict(p.verdict.value);
  t.expect_close("value", p.value, 1e-9);
  if (t.expect("remainder_bound")) {
    const double bound = real_of(*t.expect("remainder_bound"), t.where + ".expect.remainder_bound");
    t.record("remainder_bound", p.remainder_bound, "<=", bound, p.remainder_bound <= bound);
  }
  t.verdict_rows.push_back({to_string(p.verdict.value), fmt(p.verdict.integral), fmt(p.value), fmt(p.remainder_bound)});
}

void op_commutation(Task& t) {
  const CommutationReport r = verify_commutation_theorem(t.action());
  t.outputs["crossed_dimension"] = r.crossed_dimension;
  t.outputs["fixed_point_dimension"] = r.fixed_point_dimension;
  t.holds("dimensions agree", r.crossed_dimension == r.fixed_point_dimension);
  t.at_most("span_distance", r.span_distance, 1e-7);
  t.at_most("covariance", r.covariance, 1e-9);
  t.at_most("homomorphism", r.homomorphism, 1e-9);
  t.at_most("v_pi", r.v_pi, 1e-10);
  t.at_most("v_translation", r.v_translation, 1e-10);
}

void op_compression(Task& t) {
  const CompressionReport r = verify_compression(t.action(), t.blocks.frame(t.ref("frame")));
  t.outputs["compressed_dimension"] = r.compressed_dimension;
  t.outputs["invariant_dimension"] = r.invariant_dimension;
  t.holds("dimensions agree", r.compressed_dimension == r.invariant_dimension);
  t.at_most("span_distance", r.span_distance, 1e-7);
  t.at_most("product_closure", r.product_closure, 1e-7);
}

void op_relativisation(Task& t) {
  const GroupAction act = t.action();
  const QuantumReferenceFrame& frame = t.blocks.frame(t.ref("frame"));
  const int samples = t.has("samples") ? int_of(t.arg("samples"), t.where + ".samples") : 10;
  const int triples = t.has("triples") ? int_of(t.arg("triples"), t.where + ".triples") : 20;
  const RelativisationReport r = check_relativisation(act, frame, samples, t.rng);
  t.outputs["sharp"] = frame.sharp();
  t.at_most("unitality", r.unitality, 1e-8);
  t.at_most("adjoint", r.adjoint, 1e-8);
  t.at_most("invariance", r.invariance, 1e-8);
  t.at_least("min_eigenvalue", r.min_eigenvalue, -t.tol(1e-8));
  t.at_least("cp_min_eigenvalue", r.cp_min_eigenvalue, -t.tol(1e-8));
  if (const json* e = t.expect("multiplicative")) {
    if (e->get<bool>()) t.at_most("multiplicativity", r.multiplicativity, 1e-9);
    else t.at_least("multiplicativity", r.multiplicativity, 0.1);
  } else {
    t.defects["multiplicativity"] = num(r.multiplicativity);
  }
  double worst = 0.0;
  for (int k = 0; k < triples; ++k) {
    const Operator x = random_invariant_element(act, frame, t.rng);
    const DensityState ws = random_density(act.dim(), t.rng);
    const DensityState wr = random_density(frame.dim(), t.rng);
    worst = std::max(worst, expected_relative_outcome(x, act, frame, ws, wr).discrepancy());
  }
  t.outputs["triples"] = triples;
  t.at_most("expected_outcome", worst, 1e-9);
}

void op_dilation(Task& t) {
  const QuantumReferenceFrame& frame = t.blocks.frame(t.ref("frame"));
  const Dilation d = frame.principal() ? covariant_dilate(frame) : frame_embedding(frame);
  const DilationDefects dd = dilation_defects(d, frame.povm(), frame.rep());
  t.outputs["principal"] = frame.principal();
  t.outputs["ambient_dim"] = d.isometry.rows();
  t.outputs["aux_dim"] = d.aux_dim;
  t.at_most("isometry", dd.isometry, 1e-10);
  t.at_most("projections", dd.projections, 1e-9);
  t.at_most("reconstruction", dd.reconstruction, 1e-9);
  t.at_most("intertwining", dd.intertwining, 1e-9);
}

void op_algebra_structure(Task& t) {
  const OperatorAlgebra& a = t.blocks.algebra(t.ref("algebra"));
  const OperatorAlgebra comm = commutant(a);
  const BlockStructure bs = decompose(a, t.rng());
  json blocks = json::array();
  long long sum_n2 = 0, sum_nm = 0, sum_m2 = 0;
  for (const auto& b : bs.blocks) {
    blocks.push_back(json::array({b.size, b.multiplicity}));
    sum_n2 += 1LL * b.size * b.size;
    sum_nm += 1LL * b.size * b.multiplicity;
    sum_m2 += 1LL * b.multiplicity * b.multiplicity;
  }
  t.outputs["dimension"] = a.dimension();
  t.outputs["ambient_dim"] = a.ambient_dim();
  t.outputs["commutant_dimension"] = comm.dimension();
  t.outputs["centre_dimension"] = centre(a).dimension();
  t.outputs["factor"] = is_factor(a);
  t.outputs["blocks"] = blocks;
  t.holds("sum n^2 = dim A", sum_n2 == a.dimension());
  t.holds("sum n m = ambient dim", sum_nm == a.ambient_dim());
  t.holds("sum m^2 = dim A'", sum_m2 == comm.dimension());
  t.at_most("double_commutant", span_distance(commutant(comm), a), 1e-8);
  t.at_most("block_structure", block_structure_defect(a, bs), 1e-8);
  const AlgebraDefects ad = algebra_defects(a);
  t.at_most("product_closure", ad.product_closure, 1e-9);
  t.at_most("adjoint_closure", ad.adjoint_closure, 1e-9);

  if (t.has("tensor_with")) {
    const OperatorAlgebra& b = t.blocks.algebra(t.ref("tensor_with"));
    const OperatorAlgebra ab = tensor_algebra(a, b);
    double factorised = 0.0, tracial = 0.0, faithful = kInf;
    for (int k = 0; k < 10; ++k) {
      const Operator x1 = random_element(a, t.rng), x2 = random_element(b, t.rng);
      factorised = std::max(factorised, std::abs(normalised_trace(tensor_product(x1, x2)) -
                                                 normalised_trace(x1) * normalised_trace(x2)));
      const Operator x = random_element(ab, t.rng), y = random_element(ab, t.rng);
      tracial = std::max(tracial, std::abs(normalised_trace(x * y) - normalised_trace(y * x)));
      faithful = std::min(faithful, normalised_trace(x.adjoint() * x).real() / std::max(1e-300, x.squaredNorm()));
    }
    t.at_most("product_trace_factorisation", factorised, 1e-9);
    t.at_most("product_trace_tracial", tracial, 1e-9);
    t.record("product_trace_faithful", faithful, ">", 0.0, faithful > 0.0);
  }
}

void op_modular(Task& t) {
  ModularData md = [&] {
    if (t.has("state")) {
      const auto [alg, omega] = gns_doubling(t.blocks.state(t.arg("state"), t.where + ".state"));
      return modular_data(alg, omega);
    }
    const OperatorAlgebra& a = t.blocks.algebra(t.ref("algebra"));
    Vector v = vector_of(t.arg("vector"), t.where + ".vector");
    return modular_data(a, v / v.norm());
  }();
  std::vector<double> spec;
  const HermitianEig e = hermitian_eig(md.delta, 1e-8);
  for (Eigen::Index i = 0; i < e.values.size(); ++i) spec.push_back(e.values(i));
  std::sort(spec.begin(), spec.end());
  json sj = json::array();
  for (double x : spec) sj.push_back(num(x));
  t.outputs["delta_spectrum"] = sj;
  t.outputs["algebra_dimension"] = md.algebra.dimension();
  const ModularDefects d = modular_defects(md);
  t.at_most("s_on_basis", d.s_on_basis, 1e-9);
  t.at_most("polar", d.polar, 1e-9);
  t.at_most("j_involution", d.j_involution, 1e-9);
  t.at_most("j_unitary", d.j_unitary, 1e-9);
  t.at_least("delta_min_eigenvalue", d.delta_min_eigenvalue, 0.0);
  t.at_most("flow_invariance", d.flow_invariance, 1e-7);
  t.at_most("commutant", d.commutant, 1e-7);
  t.at_most("j_omega", d.j_omega, 1e-10);
  t.at_most("delta_omega", d.delta_omega, 1e-10);
  if (const json* want = t.expect("delta_spectrum")) {
    if (!want->is_array() || want->size() != spec.size()) {
      t.holds("delta_spectrum size", false);
    } else {
      std::vector<double> w;
      for (const auto& x : *want) w.push_back(real_of(x, t.where + ".expect.delta_spectrum"));
      std::sort(w.begin(), w.end());
      double worst = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) worst = std::max(worst, std::abs(w[i] - spec[i]));
      t.at_most("delta_spectrum error", worst, 1e-10);
    }
  }
}

void op_kms(Task& t) {
  const Operator h = t.blocks.op(t.arg("hamiltonian"), t.where + ".hamiltonian");
  const double b = t.beta();
  const DensityState omega = [&] {
    if (!t.has("state") || t.arg("state") == "gibbs") {
      try {
        return gibbs_state(h, b);
      } catch (const qrf::Error& e) {
        throw ConfigError(t.where + ": " + e.what());
      }
    }
    return t.blocks.state(t.arg("state"), t.where + ".state");
  }();
  std::vector<KmsPair> pairs;
  const json& pj = t.arg("pairs");
  for (std::size_t i = 0; i < pj.size(); ++i) {
    const std::string w = t.where + ".pairs[" + std::to_string(i) + "]";
    pairs.push_back({pj[i].value("label", "pair" + std::to_string(i)), t.blocks.op(member(pj[i], "x", w), w + ".x"),
                     t.blocks.op(member(pj[i], "y", w), w + ".y")});
  }
  std::vector<double> grid = default_kms_grid();
  if (t.has("grid")) {
    grid.clear();
    for (const auto& x : t.arg("grid")) grid.push_back(real_of(x, t.where + ".grid"));
  }
  const bool geometric = t.spec.value("geometric", false);
  const KmsReport r = kms_check(omega, h, b, pairs, grid, geometric, t.options.kms_sign);
  t.outputs["residual"] = num(r.residual);
  json per = json::object();
  for (const auto& p : r.pairs) {
    per[p.label] = num(p.residual);
    t.residual_rows.push_back({p.label, fmt(p.residual)});
  }
  t.outputs["pair_residuals"] = per;
  t.outputs["sign"] = to_string(r.sign);
  if (r.geometric_flow_defect) t.outputs["geometric_flow_defect"] = num(*r.geometric_flow_defect);
  if (const json* e = t.expect("kms")) {
    if (e->get<bool>()) {
      t.at_most("residual", r.residual, 1e-9);
      if (r.geometric_flow_defect) t.at_most("geometric_flow", *r.geometric_flow_defect, 1e-8);
    } else {
      t.at_least("residual", r.residual, t.tol(1e-9));
    }
  }
  t.expect_close("residual", r.residual, 1e-6);
}

MeasurementScheme inverse_probe_rule(const MeasurementScheme& s, const Operator& us, const Operator& up) {
  const MeasurementScheme right = transform_scheme(s, us, up);
  const Operator sigma = up.adjoint() * s.probe_prep().op() * up;
  return MeasurementScheme(s.system_dim(), s.probe_dim(), right.scattering(),
                           DensityState(0.5 * (sigma + sigma.adjoint())), right.probe_obs());
}

void op_equivariance(Task& t) {
  const MeasurementScheme& s = t.blocks.scheme(t.ref("scheme"));
  const UnitaryRep& us = t.blocks.rep(t.ref("system_representation"));
  const UnitaryRep& up = t.blocks.rep(t.ref("probe_representation"));
  const std::string rule = t.spec.value("probe_rule", std::string("standard"));
  if (rule != "standard" && rule != "inverse") throw ConfigError(t.where + ".probe_rule: expected standard or inverse");
  EquivarianceReport r;
  try {
    r = verify_equivariance(s, us, up, rule == "inverse" ? SchemeTransform(inverse_probe_rule) : SchemeTransform{});
  } catch (const qrf::Error& e) {
    throw ConfigError(t.where + ": " + e.what());
  }
  t.outputs["induced_observable"] = matrix_json(induced_observable(s));
  t.outputs["elements_checked"] = r.elements_checked;
  t.outputs["worst_element"] = r.worst_element;
  t.outputs["probe_rule"] = rule;
  const json* e = t.expect("equivariant");
  if (!e || e->get<bool>()) t.at_most("defect", r.defect, 1e-9);
  else t.at_least("defect", r.defect, 0.1);
}

void op_induced_observable(Task& t) {
  const MeasurementScheme& s = t.blocks.scheme(t.ref("scheme"));
  const Operator e = induced_observable(s);
  t.outputs["induced_observable"] = matrix_json(e);
  if (const json* want = t.expect("matrix")) {
    const Operator w = t.blocks.op(*want, t.where + ".expect.matrix");
    if (w.rows() != e.rows()) throw ConfigError(t.where + ".expect.matrix: dimension mismatch");
    t.at_most("matrix error", operator_norm(e - w), 1e-10);
  }
}

void op_gauge(Task& t) {
  const MeasurementScheme& s = t.blocks.scheme(t.ref("scheme"));
  std::vector<std::pair<Operator, Operator>> gauge;
  const json& g = t.arg("gauge");
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::string w = t.where + ".gauge[" + std::to_string(i) + "]";
    gauge.emplace_back(t.blocks.op(member(g[i], "system", w), w + ".system"), t.blocks.op(member(g[i], "probe", w), w + ".probe"));
  }
  t.at_most("gauge", gauge_defect(s, gauge), 1e-9);
}

struct OpInfo {
  std::function<void(Task&)> run;
  std::vector<std::string> required;
};

const std::map<std::string, OpInfo>& operations() {
  static const std::map<std::string, OpInfo> ops{
      {"type_condition", {op_type_condition, {"multiplicity", "beta"}}},
      {"desitter_example1", {op_desitter_example1, {"V", "beta"}}},
      {"trace_of_band", {op_trace_of_band, {"K"}}},
      {"kms_weight", {op_kms_weight, {"f", "multiplicity", "beta"}}},
      {"so3_partition", {op_so3_partition, {"energies", "beta"}}},
      {"commutation", {op_commutation, {"algebra", "representation"}}},
      {"compression", {op_compression, {"algebra", "representation", "frame"}}},
      {"relativisation", {op_relativisation, {"algebra", "representation", "frame"}}},
      {"dilation", {op_dilation, {"frame"}}},
      {"algebra_structure", {op_algebra_structure, {"algebra"}}},
      {"modular", {op_modular, {}}},
      {"kms", {op_kms, {"hamiltonian", "beta", "pairs"}}},
      {"equivariance", {op_equivariance, {"scheme", "system_representation", "probe_representation"}}},
      {"induced_observable", {op_induced_observable, {"scheme"}}},
      {"gauge", {op_gauge, {"scheme", "gauge"}}},
  };
  return ops;
}

// Argument keys that name blocks, resolved before any task runs.
const std::map<std::string, std::string>& reference_keys() {
  static const std::map<std::string, std::string> keys{
      {"algebra", "algebras"},          {"tensor_with", "algebras"},
      {"representation", "representations"}, {"system_representation", "representations"},
      {"probe_representation", "representations"}, {"frame", "frames"},
      {"scheme", "schemes"},
  };
  return keys;
}

void resolve(Blocks& blocks, const std::string& kind, const std::string& name) {
  if (kind == "algebras") blocks.algebra(name);
  else if (kind == "representations") blocks.rep(name);
  else if (kind == "frames") blocks.frame(name);
  else if (kind == "schemes") blocks.scheme(name);
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }
  return os.str();
}

}  // namespace

RunResult run_scenario(const json& config, const RunOptions& options, const std::string& scenario_name) {
  if (!config.is_object()) throw ConfigError("scenario: top level must be an object");
  if (!config.contains("version")) throw ConfigError("version: missing");
  if (config["version"] != kScenarioVersion)
    throw ConfigError("version: unsupported '" + config["version"].dump() + "', expected '" + kScenarioVersion + "'");
  if (!config.contains("tasks") || !config["tasks"].is_array()) throw ConfigError("tasks: missing task list");
  std::uint64_t seed = 0;
  if (config.contains("seed")) {
    const json& s = config["seed"];
    if (!s.is_number_integer() || (!s.is_number_unsigned() && s.get<std::int64_t>() < 0)) throw ConfigError("seed: expected a nonnegative integer");
    seed = config["seed"].get<std::uint64_t>();
  }
  if (options.seed) seed = *options.seed;

  Blocks blocks(config);
  const json& tasks = config["tasks"];

  // Validate every task and resolve its references before running anything.
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const json& task = tasks[i];
    std::string where = "tasks[" + std::to_string(i) + "]";
    if (!task.is_object()) throw ConfigError(where + ": expected an object");
    const std::string id = task.contains("id") ? task["id"].get<std::string>() : "task" + std::to_string(i);
    where += " (id '" + id + "')";
    if (!seen.insert(id).second) throw ConfigError(where + ": duplicate task id");
    if (!task.contains("op") || !task["op"].is_string()) throw ConfigError(where + ": missing 'op'");
    const auto it = operations().find(task["op"].get<std::string>());
    if (it == operations().end()) throw ConfigError(where + ": unsupported operation '" + task["op"].get<std::string>() + "'");
    for (const auto& key : it->second.required)
      if (!task.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
    for (const auto& [key, kind] : reference_keys()) {
      if (!task.contains(key)) continue;
      if (!task[key].is_string()) throw ConfigError(where + "." + key + ": expected a block name");
      const std::string name = task[key].get<std::string>();
      if (!blocks.has(kind, name)) throw ConfigError(where + "." + key + ": unresolved " + kind + " reference '" + name + "'");
      try {
        resolve(blocks, kind, name);
      } catch (const ConfigError& e) {
        throw ConfigError(where + "." + key + " -> " + e.what());
      }
    }
    ids.push_back(id);
  }

  RunResult result;
  json records = json::array();
  std::vector<std::vector<std::string>> verdicts, residuals;
  int passed = 0, failed = 0, informational = 0;
  double total_ms = 0.0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const json& spec = tasks[i];
    const std::string op = spec["op"].get<std::string>();
    const std::string where = "tasks[" + std::to_string(i) + "] (id '" + ids[i] + "')";
    blocks.touched().clear();
    Task t{spec, where, blocks, options, std::mt19937_64(seed ^ fnv1a(ids[i]))};
    const auto start = std::chrono::steady_clock::now();
    try {
      operations().at(op).run(t);
    } catch (const qrf::Error& e) {
      throw ConfigError(where + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(where + ": " + e.what());
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    total_ms += ms;

    std::string digest_input = spec.dump();
    for (const auto& key : blocks.touched()) digest_input += "\n" + key + "=" + blocks.definition(key).dump();

    std::string status = "DONE";
    if (!t.checks.empty()) {
      bool ok = true;
      for (const auto& c : t.checks) ok = ok && c["passed"].get<bool>();
      for (const auto& [k, v] : t.defects.items())
        if (v == "nan") ok = false;
      status = ok ? "PASS" : "FAIL";
    }
    (status == "PASS" ? passed : status == "FAIL" ? failed : informational)++;

    for (auto row : t.verdict_rows) {
      row.insert(row.begin(), {ids[i], op});
      verdicts.push_back(row);
    }
    for (auto row : t.residual_rows) {
      row.insert(row.begin(), ids[i]);
      residuals.push_back(row);
    }

    json rec;
    rec["id"] = ids[i];
    rec["op"] = op;
    rec["inputs_digest"] = hex64(fnv1a(digest_input));
    rec["status"] = status;
    rec["outputs"] = t.outputs;
    rec["defects"] = t.defects;
    rec["checks"] = t.checks;
    rec["elapsed_ms"] = std::round(ms * 1000.0) / 1000.0;
    if (options.verbose) std::fprintf(stderr, "[%s] %s (%s) %.3f ms\n", status.c_str(), ids[i].c_str(), op.c_str(), ms);
    records.push_back(rec);
  }

  json env;
  env["tool"] = "qrflab";
  env["scenario_version"] = kScenarioVersion;
  env["scenario"] = scenario_name;
  env["scenario_digest"] = hex64(fnv1a(config.dump()));
  env["seed"] = seed;
  env["tolerance_override"] = options.tolerance ? num(*options.tolerance) : json(nullptr);
  env["kms_sign"] = to_string(options.kms_sign);

  json summary;
  summary["tasks"] = tasks.size();
  summary["passed"] = passed;
  summary["failed"] = failed;
  summary["informational"] = informational;
  summary["status"] = failed ? "FAIL" : "PASS";
  summary["elapsed_ms"] = std::round(total_ms * 1000.0) / 1000.0;

  result.report["environment"] = env;
  result.report["tasks"] = records;
  result.report["summary"] = summary;
  result.exit_code = failed ? 1 : 0;
  if (!verdicts.empty())
    result.tables.push_back({"verdicts", csv({"task", "op", "verdict", "integral", "value", "remainder_bound"}, verdicts)});
  if (!residuals.empty()) result.tables.push_back({"residuals", csv({"task", "pair", "residual"}, residuals)});
  return result;
}

RunResult run_scenario_file(const std::filesystem::path& path, const RunOptions& options) {
  std::ifstream in(path);
  if (!in) throw ConfigError("scenario: cannot read " + path.string());
  json config;
  try {
    config = json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("scenario: " + path.filename().string() + " is not valid JSON: " + e.what());
  }
  return run_scenario(config, options, path.filename().string());
}

std::vector<std::filesystem::path> write_outputs(const RunResult& result, const std::filesystem::path& dir,
                                                 const std::string& stem, bool csv_tables) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  const auto report = dir / (stem + ".report.json");
  std::ofstream(report) << report_text(result.report);
  written.push_back(report);
  if (csv_tables)
    for (const auto& t : result.tables) {
      const auto p = dir / (stem + "." + t.name + ".csv");
      std::ofstream(p) << t.content;
      written.push_back(p);
    }
  return written;
}

}  // namespace qrflab
