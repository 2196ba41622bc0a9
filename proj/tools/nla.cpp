/*
 * Copyright 2026 The nla Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nla/complanart.hpp"
#include "nla/dynamics.hpp"
#include "nla/eigen.hpp"
#include "nla/io.hpp"
#include "nla/numeric.hpp"

namespace {

using namespace nla;

enum Exit { ok = 0, parse_error = 2, scope_error = 3, computation_error = 4 };

struct Common {
  std::string file;
  bool dump = false;
  uint64_t seed = 0x5eed;
  std::vector<std::string> set;
};

// NLA_PRECISION: decimal digits trusted on the numeric path (residual and clustering tolerances).
EigenOptions eigen_options(const Common& c) {
  EigenOptions o;
  o.seed = c.seed;
  if (const char* p = std::getenv("NLA_PRECISION")) {
    int digits = std::atoi(p);
    if (digits < 3 || digits > 15) throw ParseError("NLA_PRECISION must be between 3 and 15");
    o.tolerance = std::pow(10.0, -digits);
    o.cluster = std::pow(10.0, -(digits * 7) / 9);
  }
  return o;
}

ProblemFile load(const Common& c) {
  auto f = load_problem(c.file);
  for (const auto& s : c.set) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("--set expects name=value, got " + s);
    auto name = s.substr(0, eq);
    if (std::find(f.parameters.begin(), f.parameters.end(), name) == f.parameters.end())
      throw ParseError("--set names an unknown parameter " + name);
    f.values[name] = parse_rational(s.substr(eq + 1));
  }
  f.parsed();
  return f;
}

std::map<std::string, Rational> parse_point(const std::string& text) {
  std::map<std::string, Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("point expects name=value pairs, got " + item);
    out[item.substr(0, eq)] = parse_rational(item.substr(eq + 1));
  }
  return out;
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_resultant(const Common& c) {
  auto f = load(c);
  std::cout << macaulay_resultant(f.resultant_system()) << "\n";
  return ok;
}

struct ComplanartFlags {
  bool raw_power = false;
  std::string oracle_point;
  std::string route = "auto";
};

int cmd_complanart(const Common& c, const ComplanartFlags& fl) {
  auto f = load(c);
  auto sys = f.system();
  ComplanartOptions opt;
  opt.seed = c.seed;
  if (fl.route == "limit") opt.route = ComplanartRoute::limit;
  else if (fl.route == "exterior") opt.route = ComplanartRoute::exterior;
  else if (fl.route != "auto") throw ParseError("--route must be auto, limit or exterior");
  auto r = complanart(sys, opt);
  if (r.shortcut_applied) std::cout << "shortcut: fewer roots than dimensions (N < n), complanart is 1\n";
  std::cout << "complanart: " << r.complanart << "\n";
  std::cout << "method: " << r.method << "\n";
  if (!r.g1.empty()) std::cout << "g1: " << r.g1 << " (attempts " << r.g1_attempts << ", seed " << c.seed << ")\n";
  if (fl.raw_power) {
    if (r.raw_power_available) std::cout << "raw power (k = " << r.k << "): " << r.raw_power << "\n";
    else std::cout << "raw power: C^" << r.k << ", not expanded\n";
  }
  if (!fl.oracle_point.empty()) {
    auto point = parse_point(fl.oracle_point);
    auto o = numeric_complanart_oracle(sys, point, c.seed);
    Rational exact = r.complanart.evaluate_at(point) * complanart_unit(r.n, r.N);
    const double diff = relative_difference(to_cplx(exact), o.value);
    std::cout << "oracle: " << o.value.real() << (o.value.imag() < 0 ? " - " : " + ") << std::abs(o.value.imag())
              << "i, exact " << exact.get_str() << ", relative difference " << diff << "\n";
    return diff < 1e-6 ? ok : computation_error;
  }
  return ok;
}

struct EigenFlags {
  bool charpoly = false;
  std::string canonical;
  bool complanart = false;
};

json charpoly_json(const PolyMap& A, const EigenReport& rep) {
  auto L = lambda_space(A);
  auto ch = characteristic_polynomial(A, L);
  auto fc = verify_factorization(A, rep, ch, L);
  json j;
  j["lambda"] = L.form().to_string();
  j["polynomial"] = ch.to_string();
  std::vector<std::string> fs;
  for (const auto& x : fc.factors) fs.push_back(x.to_string());
  j["factors"] = fs;
  j["remainder"] = fc.remainder.to_string();
  j["lambda_free"] = fc.lambda_free;
  if (fc.unit_vs_resultant) j["unit_vs_resultant"] = fc.unit_vs_resultant->get_str();
  j["verified"] = fc.pass;
  if (!fc.message.empty()) j["message"] = fc.message;
  return j;
}

int cmd_eigen(const Common& c, const EigenFlags& fl) {
  auto f = load(c);
  auto A = f.map();
  auto rep = solve_eigenvectors(A, eigen_options(c));
  json j = to_json(rep);
  if (fl.charpoly) j["characteristic_polynomial"] = charpoly_json(A, rep);
  if (!fl.canonical.empty()) {
    auto comma = fl.canonical.find(',');
    if (comma == std::string::npos) throw ParseError("--canonical expects two eigenvector numbers, e.g. 1,2");
    size_t i = std::stoul(fl.canonical.substr(0, comma)), k = std::stoul(fl.canonical.substr(comma + 1));
    if (i < 1 || k < 1 || i > rep.eigenvectors.size() || k > rep.eigenvectors.size())
      throw ScopeError("--canonical: eigenvector number out of range");
    auto cf = canonical_form(A, rep.eigenvectors[i - 1], rep.eigenvectors[k - 1]);
    json cj;
    cj["form"] = cf.form;
    std::vector<std::string> comps, freec;
    for (const auto& x : cf.map.components) comps.push_back(x.to_string());
    for (const auto& x : cf.free_components) freec.push_back(x.to_string());
    cj["map"] = comps;
    cj["cross_coefficients"] = freec;
    cj["fixed_components_ok"] = cf.fixed_components_ok;
    j["canonical_form"] = cj;
  }
  if (fl.complanart) {
    auto ec = eigen_complanart(A, ComplanartOptions{.seed = c.seed});
    json cj;
    cj["complanart"] = ec.result.complanart.to_string();
    cj["method"] = ec.result.method;
    if (!A.parametric()) cj["witnesses"] = complanarity_witnesses(rep, eigen_options(c).tolerance);
    j["eigen_complanart"] = cj;
  }
  print_json(j);
  return ok;
}

int cmd_charpoly(const Common& c) {
  auto f = load(c);
  auto A = f.map();
  auto rep = solve_eigenvectors(A, eigen_options(c));
  print_json(charpoly_json(A, rep));
  return ok;
}

int cmd_stability(const Common& c) {
  auto f = load(c);
  auto A = f.map();
  auto rep = solve_eigenvectors(A, eigen_options(c));
  auto v = stability_verdict(A, rep);
  std::cout << "verdict: " << to_string(v.verdict) << "\n";
  json j = to_json(v);
  if (v.witness) j["witness_vector"] = to_json(rep.eigenvectors[*v.witness]);
  print_json(j);
  return ok;
}

struct PhaseFlags {
  int seeds = 24;
  double dt = 1e-3;
  long steps = 3000;
  double guard = 1e9;
  std::string svg, csv, json_path;
};

int cmd_phase(const Common& c, const PhaseFlags& fl) {
  auto f = load(c);
  auto A = f.map();
  if (A.n() != 2) throw ScopeError("phase portraits are two-dimensional");
  PortraitOptions po;
  po.ring_seeds = fl.seeds;
  po.dt = fl.dt;
  po.steps = fl.steps;
  po.blow_up_norm = fl.guard;
  po.eigen = eigen_options(c);
  auto p = phase_portrait(A, po);
  json j = to_json(p);
  if (!fl.svg.empty()) {
    std::ofstream(fl.svg) << to_svg(p);
  }
  if (!fl.csv.empty()) {
    std::ofstream out(fl.csv);
    out << "trajectory,t," << A.vars[0] << "," << A.vars[1] << "\n";
    out.precision(12);
    for (size_t i = 0; i < p.trajectories.size(); ++i) {
      const auto& tr = p.trajectories[i];
      for (size_t k = 0; k < tr.times.size(); ++k)
        out << i << "," << (tr.backward ? -tr.times[k] : tr.times[k]) << "," << tr.states[k][0] << "," << tr.states[k][1]
            << "\n";
    }
  }
  if (!fl.json_path.empty()) {
    std::ofstream(fl.json_path) << j.dump() << "\n";
    json summary;
    summary["annotations"] = j["annotations"];
    summary["stability"] = j["stability"];
    summary["trajectories"] = p.trajectories.size();
    print_json(summary);
  } else {
    print_json(j);
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resultants, complanarts and eigenvectors of polynomial systems and maps"};
  app.require_subcommand(1);
  Common common;
  ComplanartFlags cfl;
  EigenFlags efl;
  PhaseFlags pfl;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", common.file, "problem file (JSON)")->required();
    sub->add_flag("--dump", common.dump, "print the parsed problem file and exit");
    sub->add_option("--seed", common.seed, "seed for randomized choices");
    sub->add_option("--set", common.set, "override a parameter value, name=value");
  };
  auto* res = app.add_subcommand("resultant", "exact resultant of a system or map");
  add_common(res);
  auto* cpl = app.add_subcommand("complanart", "complanart of n-1 forms in n variables (map: its eigen system)");
  add_common(cpl);
  cpl->add_flag("--raw-power", cfl.raw_power, "also print C^(n!/2)");
  cpl->add_option("--oracle-check", cfl.oracle_point, "compare with the numeric oracle at name=value,...");
  cpl->add_option("--route", cfl.route, "auto, limit or exterior");
  auto* eig = app.add_subcommand("eigen", "eigenvectors of a homogeneous map, as JSON");
  add_common(eig);
  eig->add_flag("--charpoly", efl.charpoly, "characteristic polynomial and its factorization");
  eig->add_option("--canonical", efl.canonical, "canonical form in the basis of eigenvectors i,j (1-based)");
  eig->add_flag("--complanart", efl.complanart, "complanart of the homogenized eigen system");
  auto* chp = app.add_subcommand("charpoly", "characteristic polynomial with factorization check");
  add_common(chp);
  auto* stab = app.add_subcommand("stability", "stability verdict for z' = A(z) at the origin");
  add_common(stab);
  auto* ph = app.add_subcommand("phase", "phase portrait of a planar map");
  add_common(ph);
  ph->add_option("--seeds", pfl.seeds, "seeds on the unit circle");
  ph->add_option("--dt", pfl.dt, "integration step");
  ph->add_option("--steps", pfl.steps, "steps per trajectory");
  ph->add_option("--guard", pfl.guard, "blow-up norm");
  ph->add_option("--svg", pfl.svg, "write an SVG rendering");
  ph->add_option("--csv", pfl.csv, "write trajectories as CSV");
  ph->add_option("--json", pfl.json_path, "write the portrait bundle here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? ok : parse_error;
  }
  try {
    if (common.dump) {
      print_json(to_json(load(common)));
      return ok;
    }
    if (*res) return cmd_resultant(common);
    if (*cpl) return cmd_complanart(common, cfl);
    if (*eig) return cmd_eigen(common, efl);
    if (*chp) return cmd_charpoly(common);
    if (*stab) return cmd_stability(common);
    if (*ph) return cmd_phase(common, pfl);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return parse_error;
  } catch (const ScopeError& e) {
    std::cerr << "out of scope: " << e.what() << "\n";
    return scope_error;
  } catch (const LimitNotEvaluable& e) {
    std::cerr << "limit not evaluable: " << e.what() << "\n";
    return computation_error;
  } catch (const Error& e) {
    std::cerr << "computation failed: " << e.what() << "\n";
    return computation_error;
  }
  return ok;
}
