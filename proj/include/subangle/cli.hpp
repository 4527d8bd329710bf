#pragma once

// Command-line front end. `run` is the whole program minus process setup so
// that tests can drive it with argument vectors and string streams.
//
// Exit codes: 0 success, 1 internal failure, 2 usage error, 3 input parse
// error, 4 mathematical precondition failure.

#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "canonical.hpp"
#include "config.hpp"
#include "error.hpp"
#include "inertia.hpp"
#include "io.hpp"
#include "matrix.hpp"
#include "principal.hpp"
#include "subspace.hpp"

namespace subangle::cli {

enum ExitCode : int { ok = 0, internal = 1, usage = 2, parse = 3, math = 4 };

namespace detail {

using nlohmann::json;

/// Malformed flag values (as opposed to malformed files).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline json describe(const io::LoadedMatrix& m) {
  return {{"path", m.path}, {"rows", m.matrix.rows()}, {"cols", m.matrix.cols()}, {"fnv1a64", m.digest}};
}

inline json spectrum_json(const PrincipalSpectrum& s) {
  json angles = json::array();
  for (double v : s.values) angles.push_back(std::acos(std::sqrt(v)));
  return {{"values", s.values}, {"multiplicities", s.multiplicities}, {"total", s.total}, {"angles", angles}};
}

inline json spec_json(const CanonicalSpec& s) {
  return {{"n", s.n},           {"p", s.p},           {"q", s.q},
          {"r0", s.r0},         {"r0_dual", s.r0_dual()}, {"r_last", s.r_last},
          {"cosines", s.cosines}, {"multiplicities", s.multiplicities}, {"block_sizes", s.block_sizes()}};
}

inline json tolerances_json(const Tolerances& t) {
  json j = {{"orth", t.orth},
            {"cluster", t.cluster},
            {"containment", t.containment},
            {"jacobi_rel", t.jacobi_rel},
            {"jacobi_max_sweeps", t.jacobi_max_sweeps},
            {"symmetry", t.symmetry},
            {"zero", t.zero}};
  j["rank"] = t.rank ? json(*t.rank) : json("auto");
  return j;
}

inline Vector parse_flag_list(const std::string& flag, const std::string& text) {
  try {
    return io::parse_list(text);
  } catch (const ParseError& e) {
    throw UsageError("--" + flag + ": " + e.what());
  }
}

struct Options {
  std::string a, b, l, vector, values;
  std::size_t n = 0, p = 0, q = 0;
  bool degrees = false;
  bool both_angles = false;
  std::optional<double> tol_cluster, tol_rank, tol_orth;
};

inline json run_command(const std::string& cmd, const Options& o, const Tolerances& tol, std::istream& in,
                        json& inputs) {
  auto load = [&](const char* key, const std::string& path) {
    auto m = io::load_matrix(path, in);
    inputs[key] = describe(m);
    return m.matrix;
  };
  auto load_subspace = [&](const char* key, const std::string& path) {
    const Matrix m = load(key, path);
    return make_subspace(m.cols(), m, tol);
  };
  const double unit = o.degrees ? 180.0 / std::numbers::pi : 1.0;

  if (cmd == "angle") {
    const auto s1 = load_subspace("a", o.a);
    const auto s2 = load_subspace("b", o.b);
    const auto r = angle_between(s1, s2);
    json res = {{"cos_phi", r.cos_phi},   {"phi", r.phi * unit}, {"det_mmt", r.det_mmt},
                {"gamma1", r.gamma1},     {"gamma2", r.gamma2},  {"swapped", r.swapped},
                {"angle_unit", o.degrees ? "degrees" : "radians"}};
    if (o.both_angles) res["phi_supplement"] = (std::numbers::pi - r.phi) * unit;
    return res;
  }
  if (cmd == "principal") {
    const auto s1 = load_subspace("a", o.a);
    const auto s2 = load_subspace("b", o.b);
    return spectrum_json(principal_spectrum(s1, s2, tol));
  }
  if (cmd == "decompose") {
    const auto s1 = load_subspace("a", o.a);
    const auto s2 = load_subspace("b", o.b);
    const auto d = principal_decomposition(s1, s2, tol);
    json pairs = json::array();
    for (const auto& pr : d.pairs)
      pairs.push_back({{"value", pr.value},
                       {"first", io::to_json(pr.first.ortho_basis())},
                       {"second", io::to_json(pr.second.ortho_basis())}});
    json res = {{"spectrum", spectrum_json(d.spectrum)}, {"pairs", pairs}, {"swapped", d.swapped}};
    res["unmatched"] = d.unmatched ? json{{"owner", d.unmatched_owner}, {"basis", io::to_json(d.unmatched->ortho_basis())}}
                                   : json(nullptr);
    return res;
  }
  if (cmd == "canonical") {
    const auto s1 = load_subspace("a", o.a);
    const auto s2 = load_subspace("b", o.b);
    const auto cf = canonical_bases(s1, s2, tol);
    return {{"spec", spec_json(cf.spec)},
            {"P", io::to_json(cf.matrix)},
            {"sigma", io::to_json(cf.sigma)},
            {"sigma_star", io::to_json(cf.sigma_star)},
            {"pi", io::to_json(cf.pi)},
            {"pi_star", io::to_json(cf.pi_star)},
            {"inner_product_error", max_abs_diff(inner_product_matrix(cf), cf.matrix)},
            {"dualized", cf.dualized},
            {"swapped", cf.swapped}};
  }
  if (cmd == "synthesize") {
    const Vector values = parse_flag_list("values", o.values);
    inputs["n"] = o.n;
    inputs["p"] = o.p;
    inputs["q"] = o.q;
    inputs["values"] = values;
    const auto sp = synthesize_pair(o.n, o.p, o.q, values, tol);
    return {{"first", io::to_json(sp.first.ortho_basis())},
            {"second", io::to_json(sp.second.ortho_basis())},
            {"spec", spec_json(sp.spec)},
            {"dualized", sp.dualized}};
  }
  if (cmd == "dual") {
    const auto s1 = load_subspace("a", o.a);
    const auto s2 = load_subspace("b", o.b);
    const auto d = dual_principal_values(s1, s2, tol);
    return {{"pair", spectrum_json(d.pair)},
            {"dual", spectrum_json(d.dual)},
            {"unit_mult_shift", d.unit_mult_shift},
            {"consistent", d.consistent}};
  }
  if (cmd == "project") {
    const auto s = load_subspace("a", o.a);
    const Vector x = parse_flag_list("vector", o.vector);
    inputs["vector"] = x;
    const Vector xp = project_gram(x, s);
    double residual = 0.0;
    for (std::size_t i = 0; i < s.raw_basis().rows(); ++i) {
      Vector diff(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) diff[k] = x[k] - xp[k];
      residual = std::max(residual, std::abs(dot(diff, s.raw_basis().row(i))));
    }
    return {{"projection", xp}, {"orthogonality_residual", residual}};
  }
  if (cmd == "inertia") {
    const Matrix a = load("a", o.a);
    const auto l = load_subspace("l", o.l);
    const auto r = inertia_split(a, l, tol);
    json res = {{"ind_full", r.ind_full},
                {"ind_restricted", r.ind_restricted},
                {"ind_complement", r.ind_complement},
                {"additivity_holds", r.additivity_holds}};
    if (l.dim() < l.ambient_dim()) res["positive_definite_by_split"] = positive_definite_by_split(a, l, tol);
    return res;
  }
  throw UsageError("unknown command '" + cmd + "'");
}

}  // namespace detail

/// Run the CLI on `args` (program name excluded). The JSON report goes to
/// `out`, diagnostics to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               std::istream& in = std::cin) {
  CLI::App app{"Angles, principal values and canonical forms of subspace pairs", "subangle"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  detail::Options o;
  app.add_flag("--degrees", o.degrees, "Report angles in degrees");
  app.add_flag("--both-angles", o.both_angles, "Also report pi - phi");
  app.add_option("--tol-cluster", o.tol_cluster, "Principal-value clustering tolerance");
  app.add_option("--tol-rank", o.tol_rank, "Absolute numerical-rank threshold");
  app.add_option("--tol-orth", o.tol_orth, "Orthonormality check tolerance");

  auto pair_cmd = [&](const char* name, const char* help) {
    auto* sc = app.add_subcommand(name, help);
    sc->add_option("--a", o.a, "Rows spanning the first subspace (csv/json, '-' for stdin)")->required();
    sc->add_option("--b", o.b, "Rows spanning the second subspace")->required();
    return sc;
  };
  pair_cmd("angle", "Gram-determinant angle between two subspaces");
  pair_cmd("principal", "Principal values with multiplicities");
  pair_cmd("decompose", "Paired principal-subspace decomposition");
  pair_cmd("canonical", "Canonical matrix and canonical bases");
  pair_cmd("dual", "Principal values of the pair and of its complements");

  auto* syn = app.add_subcommand("synthesize", "Build a pair with prescribed principal values");
  syn->add_option("--n", o.n, "Ambient dimension")->required();
  syn->add_option("--p", o.p, "Dimension of the first subspace")->required();
  syn->add_option("--q", o.q, "Dimension of the second subspace")->required();
  syn->add_option("--values", o.values, "Comma separated squared cosines, p of them")->required();

  auto* proj = app.add_subcommand("project", "Orthogonal projection by the bordered Gram determinant");
  proj->add_option("--a", o.a, "Linearly independent rows spanning the subspace")->required();
  proj->add_option("--vector", o.vector, "Comma separated coordinates of x")->required();

  auto* inert = app.add_subcommand("inertia", "Restricted indices of a symmetric matrix");
  inert->add_option("--a", o.a, "Symmetric nonsingular matrix")->required();
  inert->add_option("--l", o.l, "Rows spanning the subspace L")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return usage;
  }

  Tolerances tol;
  if (o.tol_cluster) tol.cluster = *o.tol_cluster;
  if (o.tol_rank) tol.rank = *o.tol_rank;
  if (o.tol_orth) tol.orth = *o.tol_orth;

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    nlohmann::json inputs = nlohmann::json::object();
    nlohmann::json result = detail::run_command(cmd, o, tol, in, inputs);
    nlohmann::json report = {{"command", cmd}, {"inputs", inputs}, {"result", result},
                             {"tolerances", detail::tolerances_json(tol)}};
    out << io::to_report_string(report);
    return ok;
  } catch (const detail::UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return usage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return parse;
  } catch (const MathError& e) {
    err << "precondition failed: " << e.what() << "\n";
    return math;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return internal;
  }
}

}  // namespace subangle::cli
