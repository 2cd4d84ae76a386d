#include "cli/scenario.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace qframe::cli {
namespace {

using nlohmann::json;

class Loader {
 public:
  explicit Loader(std::filesystem::path path) : path_(std::move(path)) {}

  [[noreturn]] void fail(const YAML::Mark& mark, const std::string& msg,
                         int column_shift = 0) const {
    std::ostringstream os;
    os << path_.string();
    if (!mark.is_null()) {
      os << ':' << mark.line + 1 << ':' << mark.column + 1 + column_shift;
    }
    os << ": " << msg;
    throw ScenarioError(os.str());
  }
  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    fail(node.Mark(), msg);
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ScenarioError(path_.string() + ": " + msg);
  }

  void expect_keys(const YAML::Node& map, std::initializer_list<const char*> keys,
                   const char* where) const {
    if (!map.IsMap()) fail(map, std::string(where) + " must be a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (std::none_of(keys.begin(), keys.end(),
                       [&](const char* k) { return key == k; })) {
        fail(kv.first, "unknown key '" + key + "' in " + where);
      }
    }
  }

  std::string scalar(const YAML::Node& node, const char* what) const {
    if (!node.IsScalar()) fail(node, std::string(what) + " must be a scalar");
    return node.Scalar();
  }

  double number(const YAML::Node& node, const char* what) const {
    try {
      return node.as<double>();
    } catch (const YAML::Exception&) {
      fail(node, std::string(what) + " must be a number");
    }
  }

  std::int64_t integer(const YAML::Node& node, const char* what) const {
    try {
      return node.as<std::int64_t>();
    } catch (const YAML::Exception&) {
      fail(node, std::string(what) + " must be an integer");
    }
  }

  FieldExpr expr(const YAML::Node& node, const Chart& chart,
                 const char* what) const {
    const auto text = scalar(node, what);
    try {
      return parse_expr(text, chart);
    } catch (const ParseError& e) {
      // Quoted scalars carry the non-specific tag "!"; skip the quote.
      const int quote = node.Tag() == "!" ? 1 : 0;
      fail(node.Mark(), std::string(what) + ": " + e.what(),
           quote + static_cast<int>(e.position()));
    }
  }

  std::array<std::string, 4> four_texts(const YAML::Node& node,
                                        const char* what) const {
    if (!node.IsSequence() || node.size() != 4) {
      fail(node, std::string(what) + " must be a list of 4 expressions");
    }
    std::array<std::string, 4> out;
    for (std::size_t k = 0; k < 4; ++k) out[k] = scalar(node[k], what);
    return out;
  }

  BiquatField biquat(const YAML::Node& node, const Chart& chart,
                     const std::string& what) const {
    if (!node.IsSequence() || node.size() != 4) {
      fail(node, what + " must be a list of 4 expressions (1, e1, e2, e3)");
    }
    std::array<FieldExpr, 4> c{FieldExpr::constant(0.0), FieldExpr::constant(0.0),
                               FieldExpr::constant(0.0), FieldExpr::constant(0.0)};
    for (std::size_t k = 0; k < 4; ++k) c[k] = expr(node[k], chart, what.c_str());
    return BiquatField(std::move(c));
  }

  Point point(const YAML::Node& node, const char* what) const {
    if (!node.IsSequence() || node.size() != 4) {
      fail(node, std::string(what) + " must be a list of 4 numbers");
    }
    Point p{};
    for (std::size_t k = 0; k < 4; ++k) p[k] = number(node[k], what);
    if (!is_finite(p)) fail(node, std::string(what) + " must be finite");
    return p;
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

json texts_json(const YAML::Node& node) {
  json out = json::array();
  for (const auto& row : node) {
    if (row.IsSequence()) {
      json r = json::array();
      for (const auto& v : row) r.push_back(v.Scalar());
      out.push_back(r);
    } else {
      out.push_back(row.Scalar());
    }
  }
  return out;
}

// An inadmissible ω_μ, carrying μ so the loader can point at the entry.
class OmegaError : public Error {
 public:
  OmegaError(const std::string& msg, std::size_t index) : Error(msg), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// Everything a check will touch at q, evaluated once. DomainError means q
// (or one of its stencil points) hits an expression singularity.
void validate_point(const Scenario& s, const Point& q) {
  const auto frame = frame_at(s.basis, s.omega, q, s.fd, s.tol);
  (void)frame;
  const auto w = s.omega(q);
  for (std::size_t mu = 0; mu < 4; ++mu) {
    BasisValues single{};
    single[mu] = w[mu];
    try {
      decompose_omega(single, s.coupling, s.tol);
    } catch (const PreconditionError& e) {
      throw OmegaError(e.what(), mu);
    } catch (const DecompositionError& e) {
      throw OmegaError(e.what(), mu);
    }
  }
  for (const auto* f : {&s.psi_l, &s.psi_r, &s.vector}) {
    if (*f && !is_finite((*f)(q))) throw DomainError("field is not finite");
  }
  if (s.vector_components) {
    for (const auto& c : *s.vector_components) c(q);
  }
  if (s.lorentz) {
    require_unit((*s.lorentz)(q), s.tol);
    for (int mu = 0; mu < 4; ++mu) partial(*s.lorentz, mu, q, s.fd);
  }
  if (s.phase) {
    for (int mu = 0; mu < 4; ++mu) partial(*s.phase, mu, q, s.fd);
  }
  if (s.coordinate_map) {
    const Matrix4 j = jacobian_at(*s.coordinate_map, q, s.tol);
    const double mismatch = jacobian_mismatch(*s.coordinate_map, q, s.fd);
    const double bound = 1e-6 * (1.0 + j.cwiseAbs().maxCoeff());
    if (!(mismatch <= bound)) {
      throw PreconditionError(
          "supplied jacobian disagrees with the derivative of the forward map "
          "(max difference " + std::to_string(mismatch) + ")");
    }
  }
}

std::string point_text(const Point& p) {
  std::ostringstream os;
  os << '(' << p[0] << ", " << p[1] << ", " << p[2] << ", " << p[3] << ')';
  return os.str();
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& path,
                       const Overrides& overrides) {
  Loader in(path);
  YAML::Node root;
  try {
    root = YAML::LoadFile(path.string());
  } catch (const YAML::BadFile&) {
    in.fail("cannot read scenario file");
  } catch (const YAML::ParserException& e) {
    in.fail(e.mark, e.msg);
  }
  if (!root.IsMap()) in.fail("scenario must be a mapping");
  in.expect_keys(root,
                 {"version", "name", "chart", "coupling", "basis", "omega",
                  "fields", "lorentz", "u1", "coordinate_map", "sampling",
                  "numerics", "checks", "tolerances"},
                 "scenario");

  Scenario s;
  s.source = path;
  json echo;

  if (const auto v = root["version"]) {
    if (in.integer(v, "version") != 1) in.fail(v, "unsupported scenario version");
  }
  s.name = root["name"] ? in.scalar(root["name"], "name") : path.stem().string();
  echo["name"] = s.name;

  if (const auto c = root["chart"]) {
    try {
      s.chart = Chart(in.four_texts(c, "chart"));
    } catch (const PreconditionError& e) {
      in.fail(c, e.what());
    }
  }
  echo["chart"] = s.chart.names();

  if (const auto g = root["coupling"]) s.coupling = in.number(g, "coupling");
  if (!std::isfinite(s.coupling)) in.fail(root["coupling"], "coupling must be finite");
  echo["coupling"] = s.coupling;

  const auto basis = root["basis"];
  if (!basis) in.fail("missing 'basis'");
  if (!basis.IsSequence() || basis.size() != 4) {
    in.fail(basis, "basis must list s_0..s_3");
  }
  for (std::size_t mu = 0; mu < 4; ++mu) {
    s.basis.s[mu] = in.biquat(basis[mu], s.chart, "basis s_" + std::to_string(mu));
  }
  echo["basis"] = texts_json(basis);

  s.omega = GaugeConnection::zero(s.coupling);
  if (const auto w = root["omega"]) {
    if (!w.IsSequence() || w.size() != 4) in.fail(w, "omega must list ω_0..ω_3");
    for (std::size_t mu = 0; mu < 4; ++mu) {
      s.omega.omega[mu] = in.biquat(w[mu], s.chart, "omega ω_" + std::to_string(mu));
    }
    echo["omega"] = texts_json(w);
  }

  if (const auto f = root["fields"]) {
    in.expect_keys(f, {"psi_l", "psi_r", "vector", "vector_components"}, "fields");
    json fe;
    if (f["psi_l"]) { s.psi_l = in.biquat(f["psi_l"], s.chart, "psi_l"); fe["psi_l"] = texts_json(f["psi_l"]); }
    if (f["psi_r"]) { s.psi_r = in.biquat(f["psi_r"], s.chart, "psi_r"); fe["psi_r"] = texts_json(f["psi_r"]); }
    if (f["vector"]) { s.vector = in.biquat(f["vector"], s.chart, "vector"); fe["vector"] = texts_json(f["vector"]); }
    if (const auto vc = f["vector_components"]) {
      if (!vc.IsSequence() || vc.size() != 4) {
        in.fail(vc, "vector_components must be a list of 4 expressions");
      }
      std::array<ScalarFn, 4> comps;
      for (std::size_t k = 0; k < 4; ++k) {
        comps[k] = scalar_field(in.expr(vc[k], s.chart, "vector_components"));
      }
      s.vector_components = comps;
      fe["vector_components"] = texts_json(vc);
    }
    echo["fields"] = fe;
  }

  if (const auto l = root["lorentz"]) {
    in.expect_keys(l, {"generator"}, "lorentz");
    if (!l["generator"]) in.fail(l, "lorentz needs a generator");
    s.lorentz = LorentzField{in.biquat(l["generator"], s.chart, "lorentz generator")};
    echo["lorentz"]["generator"] = texts_json(l["generator"]);
  }

  if (const auto u = root["u1"]) {
    in.expect_keys(u, {"phi"}, "u1");
    if (!u["phi"]) in.fail(u, "u1 needs phi");
    s.phase = U1Field{scalar_field(in.expr(u["phi"], s.chart, "u1 phi"))};
    echo["u1"]["phi"] = u["phi"].Scalar();
  }

  if (const auto m = root["coordinate_map"]) {
    in.expect_keys(m, {"forward", "jacobian"}, "coordinate_map");
    if (!m["forward"] || !m["jacobian"]) {
      in.fail(m, "coordinate_map needs forward and jacobian");
    }
    CoordinateMap map;
    const auto fwd = m["forward"];
    if (!fwd.IsSequence() || fwd.size() != 4) in.fail(fwd, "forward must list 4 expressions");
    for (std::size_t mu = 0; mu < 4; ++mu) {
      map.forward[mu] = scalar_field(in.expr(fwd[mu], s.chart, "forward"));
    }
    const auto jac = m["jacobian"];
    if (!jac.IsSequence() || jac.size() != 4) in.fail(jac, "jacobian must have 4 rows");
    for (std::size_t mu = 0; mu < 4; ++mu) {
      if (!jac[mu].IsSequence() || jac[mu].size() != 4) {
        in.fail(jac[mu], "jacobian rows must have 4 entries");
      }
      for (std::size_t nu = 0; nu < 4; ++nu) {
        map.jacobian[mu][nu] = scalar_field(in.expr(jac[mu][nu], s.chart, "jacobian"));
      }
    }
    s.coordinate_map = std::move(map);
    echo["coordinate_map"] = {{"forward", texts_json(fwd)}, {"jacobian", texts_json(jac)}};
  }

  if (const auto smp = root["sampling"]) {
    in.expect_keys(smp, {"seed", "random", "box", "points"}, "sampling");
    if (smp["seed"]) s.sampling.seed = static_cast<std::uint64_t>(in.integer(smp["seed"], "seed"));
    if (smp["random"]) s.sampling.random = static_cast<int>(in.integer(smp["random"], "random"));
    if (const auto box = smp["box"]) {
      in.expect_keys(box, {"min", "max"}, "box");
      if (box["min"]) s.sampling.box_min = in.point(box["min"], "box min");
      if (box["max"]) s.sampling.box_max = in.point(box["max"], "box max");
      for (std::size_t k = 0; k < 4; ++k) {
        if (!(s.sampling.box_min[k] <= s.sampling.box_max[k])) {
          in.fail(box, "box min must not exceed box max");
        }
      }
    }
    if (const auto pts = smp["points"]) {
      if (!pts.IsSequence()) in.fail(pts, "points must be a list");
      for (const auto& p : pts) s.sampling.explicit_points.push_back(in.point(p, "point"));
    }
  }

  if (const auto num = root["numerics"]) {
    in.expect_keys(num, {"fd_step", "fd_order", "tolerance"}, "numerics");
    if (const auto h = num["fd_step"]) {
      if (h.IsSequence()) {
        s.fd.step = in.point(h, "fd_step");
      } else {
        s.fd = FDConfig::uniform(in.number(h, "fd_step"), s.fd.order);
      }
    }
    if (num["fd_order"]) s.fd.order = static_cast<int>(in.integer(num["fd_order"], "fd_order"));
    if (const auto t = num["tolerance"]) {
      in.expect_keys(t, {"abs", "rel"}, "tolerance");
      if (t["abs"]) s.tol.abs = in.number(t["abs"], "tolerance abs");
      if (t["rel"]) s.tol.rel = in.number(t["rel"], "tolerance rel");
    }
  }

  if (const auto c = root["checks"]) {
    if (c.IsScalar()) {
      if (c.Scalar() != "all") in.fail(c, "checks must be 'all' or a list of names");
    } else if (c.IsSequence()) {
      for (const auto& n : c) s.checks.push_back(in.scalar(n, "check name"));
    } else {
      in.fail(c, "checks must be 'all' or a list of names");
    }
  }
  if (const auto t = root["tolerances"]) {
    if (!t.IsMap()) in.fail(t, "tolerances must map check names to numbers");
    for (const auto& kv : t) {
      s.tolerances[kv.first.as<std::string>()] = in.number(kv.second, "tolerance");
    }
  }

  if (overrides.seed) s.sampling.seed = *overrides.seed;
  if (overrides.points) s.sampling.random = *overrides.points;
  if (overrides.fd_step) s.fd = FDConfig::uniform(*overrides.fd_step, s.fd.order);
  if (overrides.fd_order) s.fd.order = *overrides.fd_order;
  if (overrides.checks) s.checks = *overrides.checks;
  s.global_tolerance = overrides.tolerance;

  try {
    s.fd.validate();
  } catch (const PreconditionError& e) {
    in.fail(e.what());
  }
  if (!s.tol.valid()) in.fail("tolerances must be non-negative and finite");
  if (s.sampling.random < 0) in.fail("random point count must be >= 0");

  s.omega.coupling = s.coupling;

  // Explicit points must be valid as given.
  for (const auto& p : s.sampling.explicit_points) {
    try {
      validate_point(s, p);
    } catch (const BasisError& e) {
      in.fail(basis[static_cast<std::size_t>(e.index())],
              std::string(e.what()) + " at " + point_text(p));
    } catch (const OmegaError& e) {
      in.fail(root["omega"][e.index()], std::string(e.what()) + " at " + point_text(p));
    } catch (const Error& e) {
      in.fail(std::string(e.what()) + " at " + point_text(p));
    }
    s.points.push_back(p);
  }

  // Random points: seeded and uniform in the box. Draws that land on an
  // expression singularity are discarded and redrawn.
  std::mt19937_64 rng(s.sampling.seed);
  const int wanted = s.sampling.random;
  int drawn = 0;
  int rejected = 0;
  const int max_rejects = 100 * std::max(wanted, 1);
  while (drawn < wanted) {
    Point p{};
    for (std::size_t k = 0; k < 4; ++k) {
      std::uniform_real_distribution<double> d(s.sampling.box_min[k],
                                                s.sampling.box_max[k]);
      p[k] = s.sampling.box_min[k] == s.sampling.box_max[k] ? s.sampling.box_min[k] : d(rng);
    }
    try {
      validate_point(s, p);
    } catch (const DomainError&) {
      if (++rejected > max_rejects) in.fail("could not draw points clear of expression singularities");
      continue;
    } catch (const ZeroDivisorError&) {
      if (++rejected > max_rejects) in.fail("could not draw points clear of expression singularities");
      continue;
    } catch (const BasisError& e) {
      in.fail(basis[static_cast<std::size_t>(e.index())],
              std::string(e.what()) + " at " + point_text(p));
    } catch (const OmegaError& e) {
      in.fail(root["omega"][e.index()], std::string(e.what()) + " at " + point_text(p));
    } catch (const Error& e) {
      in.fail(std::string(e.what()) + " at " + point_text(p));
    }
    s.points.push_back(p);
    ++drawn;
  }
  if (s.points.empty()) in.fail("scenario has no sample points");

  echo["sampling"] = {{"seed", s.sampling.seed},
                      {"random", s.sampling.random},
                      {"box", {{"min", s.sampling.box_min}, {"max", s.sampling.box_max}}},
                      {"points", s.points}};
  echo["numerics"] = {{"fd_step", s.fd.step},
                      {"fd_order", s.fd.order},
                      {"tolerance", {{"abs", s.tol.abs}, {"rel", s.tol.rel}}}};
  echo["tolerances"] = s.tolerances;
  if (s.global_tolerance) echo["tolerance_override"] = *s.global_tolerance;
  s.echo = std::move(echo);
  return s;
}

}  // namespace qframe::cli
