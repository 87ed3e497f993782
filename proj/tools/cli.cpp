#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "knotdimer/alexander.hpp"
#include "knotdimer/drawn_graph.hpp"
#include "knotdimer/error.hpp"
#include "knotdimer/knot_diagram.hpp"
#include "knotdimer/representation.hpp"
#include "knotdimer/twisted.hpp"

namespace knotdimer::cli {

namespace {

struct Options {
  std::string knot;
  std::string pd;
  std::string file;
  std::string method = "all";
  std::string rep = "trivial";
  std::optional<int> face;
  std::string format = "text";
  std::string graph = "alexander";
  bool corpus = false;
};

struct Result {
  std::string method;
  LaurentPoly value;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MalformedInput, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Knot and a label for output records.
std::pair<KnotDiagram, std::string> load_knot(const Options& o) {
  const int given = !o.knot.empty() + !o.pd.empty() + !o.file.empty();
  if (given != 1) throw Error(ErrorKind::MalformedInput, "give exactly one of --knot, --pd, --file");
  if (!o.knot.empty()) return {builtin_knot(o.knot), o.knot};
  if (!o.pd.empty()) return {parse_pd(o.pd), "pd"};
  std::string text = read_file(o.file);
  // allow '#' comment lines in PD files
  std::istringstream in(text);
  std::string line, body;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    body += line + ' ';
  }
  if (body.find_first_not_of(" \t\r\n") == std::string::npos) return {KnotDiagram::unknot(), o.file};
  return {parse_pd(body), o.file};
}

Representation load_rep(const std::string& spec, const KnotDiagram& d) {
  if (spec == "trivial") return trivial_rep(d);
  if (spec.rfind("coloring:", 0) == 0) {
    const std::string rest = spec.substr(9);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::InvalidColoring, "expected coloring:p:c1,c2,...");
    int p = 0;
    std::vector<int> colors;
    try {
      p = std::stoi(rest.substr(0, colon));
      std::istringstream cs(rest.substr(colon + 1));
      std::string item;
      while (std::getline(cs, item, ',')) colors.push_back(std::stoi(item));
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidColoring, "non-integer in '" + spec + "'");
    }
    return builtin_coloring_rep(d, p, colors);
  }
  const Representation rho = parse_representation(read_file(spec), static_cast<int>(d.arcs().size()));
  if (!verify_representation(d, rho))
    throw Error(ErrorKind::InvalidRepresentation, "matrices break a crossing relation");
  return rho;
}

bool all_agree(const std::vector<Result>& rs) {
  return std::all_of(rs.begin(), rs.end(), [&](const Result& r) { return equal_up_to_unit(r.value, rs.front().value); });
}

void print_results(const std::vector<Result>& rs, const std::string& knot, bool verdict, const Options& o,
                   std::ostream& out) {
  const bool agree = all_agree(rs);
  if (o.format == "record") {
    for (const auto& r : rs) {
      nlohmann::ordered_json rec;
      rec["knot"] = knot;
      rec["method"] = r.method;
      rec["polynomial"] = r.value.to_string();
      rec["agree"] = agree;
      out << rec.dump() << '\n';
    }
    return;
  }
  for (const auto& r : rs) out << r.method << std::string(10 - std::min<std::size_t>(9, r.method.size()), ' ') << r.value << '\n';
  if (verdict) out << (agree ? "AGREE" : "DISAGREE") << '\n';
}

std::vector<std::string> methods_for(const std::string& method, bool with_statesum) {
  if (method == "all") {
    if (with_statesum) return {"det", "dimer", "statesum"};
    return {"det", "dimer"};
  }
  if (method == "statesum" && !with_statesum)
    throw Error(ErrorKind::MalformedInput, "method statesum is only available for alexander");
  return {method};
}

int cmd_alexander(const Options& o, std::ostream& out) {
  const auto [d, name] = load_knot(o);
  std::vector<Result> rs;
  for (const auto& m : methods_for(o.method, true)) {
    if (m == "det") rs.push_back({m, alexander_det(d, o.face)});
    else if (m == "dimer") rs.push_back({m, alexander_dimer(d, o.face)});
    else rs.push_back({m, kauffman_state_sum(d, o.face)});
  }
  print_results(rs, name, o.method == "all", o, out);
  return all_agree(rs) ? 0 : 1;
}

int cmd_twisted(const Options& o, std::ostream& out) {
  const auto [d, name] = load_knot(o);
  const Representation rho = load_rep(o.rep, d);
  std::vector<Result> rs;
  for (const auto& m : methods_for(o.method, false)) {
    if (m == "det") rs.push_back({m, twisted_det(d, rho, o.face)});
    else rs.push_back({m, twisted_dimer(d, rho, o.face)});
  }
  print_results(rs, name, o.method == "all", o, out);
  return all_agree(rs) ? 0 : 1;
}

int cmd_export(const Options& o, std::ostream& out) {
  const auto [d, name] = load_knot(o);
  if (o.graph == "alexander") {
    const AlexanderGraph ag = build_alexander_graph(d, o.face);
    const KasteleynWeighting signs = ag.graph.edges.empty() ? KasteleynWeighting{} : kauffman_weighting(ag);
    out << to_dot(ag.graph, &signs, "alexander");
    return 0;
  }
  const Representation rho = load_rep(o.rep, d);
  const DrawnGraph drawn = build_twisted_graph(d, rho, o.face);
  if (o.graph == "twisted") {
    out << to_dot(drawn, "twisted");
    return 0;
  }
  const PlaneBipartiteGraph planar = planarize(drawn);
  const KasteleynWeighting signs = kasteleyn_weighting_by_component(planar);
  out << to_dot(planar, &signs, "planar");
  return 0;
}

// ---- corpus verification ----

struct Suite {
  int checks = 0;
  std::vector<std::string> failed;
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failed.push_back(what);
  }
};

// Kasteleyn: Z of the signed graph is +-det of the plain weight matrix.
void kasteleyn_check(Suite& s, const PlaneBipartiteGraph& g, const LaurentPoly& signed_z, const std::string& tag) {
  s.expect(equal_up_to_unit(signed_z, det(weight_matrix(g))), tag + " Z(signed)=det");
}

std::optional<std::pair<int, std::vector<int>>> first_coloring(const KnotDiagram& d) {
  for (int p : {3, 5, 7}) {
    auto cs = find_colorings(d, p);
    if (!cs.empty()) return std::make_pair(p, cs.front());
  }
  return std::nullopt;
}

void knot_suite(Suite& s, const KnotDiagram& d) {
  const LaurentPoly delta = alexander_det(d);
  std::size_t states = 0;
  s.expect(equal_up_to_unit(alexander_dimer(d), delta), "dimer=det");
  s.expect(equal_up_to_unit(kauffman_state_sum(d, std::nullopt, &states), delta), "statesum=det");
  s.expect(states == alexander_state_count(d), "state count=matching count");
  s.expect(equal_up_to_unit(delta.inverted_variable(), delta), "symmetry");
  s.expect(!is_alternating(d) || has_alternating_coeffs(delta), "alternating signs");
  s.expect(equal_up_to_unit(alexander_det(d.reversed()), delta), "reversal");
  if (d.is_unknot()) return;

  for (int f : faces_adjacent_to_unbounded(d)) {
    const std::string tag = "face " + std::to_string(f);
    s.expect(equal_up_to_unit(alexander_det(d, f), delta), tag + " det");
    s.expect(equal_up_to_unit(alexander_dimer(d, f), delta), tag + " dimer");
  }
  const AlexanderGraph ag = build_alexander_graph(d);
  kasteleyn_check(s, ag.graph, partition_function(apply_signs(ag.graph, kauffman_weighting(ag))), "alexander graph");

  const Representation triv = trivial_rep(d);
  TwistedReport rep;
  s.expect(equal_up_to_unit(twisted_det(d, triv), delta), "twisted det(trivial)=det");
  const LaurentPoly tz = twisted_dimer(d, triv, std::nullopt, &rep);
  s.expect(equal_up_to_unit(tz, delta), "twisted dimer(trivial)=dimer");
  kasteleyn_check(s, rep.planar, tz, "trivial planar graph");

  if (const auto col = first_coloring(d)) {
    const Representation rho = builtin_coloring_rep(d, col->first, col->second);
    const std::string tag = "coloring p=" + std::to_string(col->first);
    s.expect(verify_representation(d, rho), tag + " relations");
    const LaurentPoly tdet = twisted_det(d, rho);
    TwistedReport trep;
    const LaurentPoly z = twisted_dimer(d, rho, std::nullopt, &trep);
    s.expect(equal_up_to_unit(z, tdet), tag + " dimer=det");
    kasteleyn_check(s, trep.planar, z, tag + " planar graph");
    // a fixed unimodular change of basis
    IntMatrix p = IntMatrix::Identity(rho.dim, rho.dim);
    p(0, rho.dim - 1) = 1;
    s.expect(equal_up_to_unit(twisted_det(d, conjugate(rho, p)), tdet), tag + " conjugation");
  }
}

int cmd_verify(const Options& o, std::ostream& out) {
  std::vector<std::string> names;
  if (o.corpus) {
    if (!o.knot.empty() || !o.pd.empty() || !o.file.empty())
      throw Error(ErrorKind::MalformedInput, "--corpus takes no knot");
    names = builtin_names();
  }
  int failures = 0;
  auto report = [&](const std::string& name, const Suite& s) {
    failures += !s.failed.empty();
    if (o.format == "record") {
      nlohmann::ordered_json rec;
      rec["knot"] = name;
      rec["checks"] = s.checks;
      rec["failed"] = s.failed;
      rec["agree"] = s.failed.empty();
      out << rec.dump() << '\n';
      return;
    }
    out << name << ": " << (s.failed.empty() ? "ok" : "FAIL") << " (" << s.checks << " checks)";
    for (const auto& f : s.failed) out << " [" << f << ']';
    out << '\n' << std::flush;
  };
  auto run_one = [&](const std::string& name, const std::function<KnotDiagram()>& load) {
    Suite s;
    try {
      knot_suite(s, load());
    } catch (const Error& e) {
      s.failed.push_back(e.what());
    }
    report(name, s);
  };
  if (o.corpus) {
    for (const auto& name : names) run_one(name, [&] { return builtin_knot(name); });
  } else {
    const auto loaded = load_knot(o);
    run_one(loaded.second, [&] { return loaded.first; });
  }
  if (o.format == "text") out << (failures ? "FAIL" : "ALL OK") << ' ' << failures << " failing\n";
  return failures ? 1 : 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Alexander and twisted Alexander polynomials by determinant, state sum and dimers", "knotdimer"};
  app.require_subcommand(1);
  Options o;

  auto knot_flags = [&](CLI::App* sub) {
    sub->add_option("--knot", o.knot, "builtin knot name (see data/knots.pd or $KNOTDIMER_TABLE)");
    sub->add_option("--pd", o.pd, "PD code, e.g. \"X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)\"");
    sub->add_option("--file", o.file, "file holding a PD code");
    sub->add_option("--face", o.face, "bounded face to delete (must touch the unbounded face)");
    sub->add_option("--format", o.format, "text or record")->check(CLI::IsMember({"text", "record"}));
  };
  auto rep_flag = [&](CLI::App* sub) {
    sub->add_option("--rep", o.rep, "representation: FILE | coloring:p:c1,c2,... | trivial");
  };

  CLI::App* alex = app.add_subcommand("alexander", "Alexander polynomial");
  knot_flags(alex);
  alex->add_option("--method", o.method, "det, dimer, statesum or all")
      ->check(CLI::IsMember({"det", "dimer", "statesum", "all"}));

  CLI::App* tw = app.add_subcommand("twisted", "twisted Alexander polynomial");
  knot_flags(tw);
  rep_flag(tw);
  tw->add_option("--method", o.method, "det, dimer or all")->check(CLI::IsMember({"det", "dimer", "statesum", "all"}));

  CLI::App* ver = app.add_subcommand("verify", "cross-check every route on one knot or the builtin table");
  knot_flags(ver);
  ver->add_flag("--corpus", o.corpus, "run over every builtin knot");

  CLI::App* ex = app.add_subcommand("export", "Graphviz DOT of a graph");
  knot_flags(ex);
  rep_flag(ex);
  ex->add_option("--graph", o.graph, "alexander, twisted or planar")
      ->check(CLI::IsMember({"alexander", "twisted", "planar"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: Usage: " << e.what() << '\n';
    return 2;
  }

  try {
    if (alex->parsed()) return cmd_alexander(o, out);
    if (tw->parsed()) return cmd_twisted(o, out);
    if (ver->parsed()) {
      if (!o.corpus && o.knot.empty() && o.pd.empty() && o.file.empty())
        throw Error(ErrorKind::MalformedInput, "verify needs --corpus or a knot");
      return cmd_verify(o, out);
    }
    return cmd_export(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace knotdimer::cli
