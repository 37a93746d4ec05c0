// qcluster: characters, walks, mutations, T-systems and the verification suites.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <qcluster/qcluster.hpp>

using namespace qcluster;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Output {
  std::string format = "json";
  std::string path;

  void emit(const Json& doc, const std::string& text) const {
    const std::string body = format == "json" ? doc.dump(2) + "\n" : text;
    if (path.empty()) {
      std::cout << body;
      return;
    }
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << body;
  }
};

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

long parse_long(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used == s.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw UsageError("bad " + what + " '" + s + "'");
}

std::vector<std::string> names_for(const CartanData& cd, const std::string& mode, std::size_t nvars) {
  return generator_names(cd, mode == "normalized" ? 'R' : 'Q', nvars == 3 * cd.r());
}

// ---------------------------------------------------------------------------

struct CharsArgs {
  std::string algebra;
  long kmax = 3;
  std::string mode = "kr";
};

void cmd_chars(const CharsArgs& a, const Output& out) {
  if (a.kmax < 0) throw UsageError("--kmax must be >= 0");
  const auto cd = build_cartan(a.algebra);
  auto state = a.mode == "normalized" ? make_qstate(cd, Variant::Normalized)
                                      : make_qstate(cd, Variant::Original,
                                                    a.mode == "kr" ? InitialMode::KR : InitialMode::Generic);
  const auto names = names_for(cd, a.mode, state.nvars());
  const char letter = a.mode == "normalized" ? 'R' : 'Q';
  Json chars = Json::array();
  std::string text;
  for (std::size_t alpha = 0; alpha < cd.r(); ++alpha)
    for (long k = 0; k <= a.kmax; ++k) {
      const auto& v = state.get(alpha, k);
      chars.push_back({{"alpha", alpha + 1}, {"k", k}, {"value", to_json(v)}});
      text += std::string(1, letter) + "[" + std::to_string(alpha + 1) + "," + std::to_string(k) +
              "] = " + to_string(v, std::span<const std::string>(names)) + "\n";
    }
  Json doc = {{"algebra", cd.name()}, {"mode", a.mode}, {"kmax", a.kmax}, {"generators", names},
              {"characters", std::move(chars)}};
  out.emit(doc, text);
}

// ---------------------------------------------------------------------------

struct WalkArgs {
  std::string algebra;
  std::size_t steps = 0;
  std::string coefficients = "none";
  bool kr = false;
};

void cmd_walk(const WalkArgs& a, const Output& out) {
  const auto cd = build_cartan(a.algebra);
  const auto coeffs = a.coefficients == "symbolic"    ? Coefficients::Symbolic
                      : a.coefficients == "minus-one" ? Coefficients::MinusOne
                                                      : Coefficients::None;
  const auto seed = build_seed(cd, coeffs, a.kr ? InitialMode::KR : InitialMode::Generic);
  const auto schedule = make_schedule(cd);
  const auto nodes = walk(cd, seed, schedule, a.steps);
  const auto names = generator_names(cd, coeffs == Coefficients::None ? 'R' : 'Q', coeffs == Coefficients::Symbolic);
  Json list = Json::array();
  std::string text;
  for (const auto& n : nodes) {
    std::vector<std::size_t> changed;
    for (auto p : n.changed) changed.push_back(p + 1);
    list.push_back({{"name", n.name},
                    {"period", n.period},
                    {"labels", n.labels},
                    {"changed", changed},
                    {"seed", to_json(n.seed)}});
    text += "node " + n.name + " (period " + std::to_string(n.period) + ")\n";
    for (auto p : n.changed) {
      text += "  x" + std::to_string(p + 1) + " = R[" + std::to_string(p % cd.r() + 1) + "," +
              std::to_string(n.labels[p]) + "] = " + to_string(n.seed.x[p], std::span<const std::string>(names)) +
              "\n";
    }
    text += "  B = " + n.seed.B.to_string() + "\n";
  }
  Json doc = {{"algebra", cd.name()}, {"steps", a.steps}, {"coefficients", a.coefficients}, {"nodes", std::move(list)}};
  out.emit(doc, text);
}

// ---------------------------------------------------------------------------

struct MutateArgs {
  std::string seed_file;
  std::string sequence;
};

template <CoefficientRing R>
void mutate_and_emit(const Json& j, const std::vector<std::size_t>& seq, const Output& out) {
  auto s = seed_from_json<R>(j);
  for (auto k : seq) {
    if (k >= s.n()) throw UsageError("direction " + std::to_string(k + 1) + " out of range");
  }
  s = mutate_sequence(std::move(s), std::span<const std::size_t>(seq));
  std::string text = "B = " + s.B.to_string() + "\n";
  for (std::size_t i = 0; i < s.n(); ++i) text += "x" + std::to_string(i + 1) + " = " + to_string(s.x[i]) + "\n";
  out.emit(to_json(s), text);
}

void cmd_mutate(const MutateArgs& a, const Output& out) {
  const Json j = read_json(a.seed_file);
  std::vector<std::size_t> seq;
  for (const auto& item : split(a.sequence, ',')) {
    const long v = parse_long(item, "direction");
    if (v < 1) throw UsageError("directions are 1-based");
    seq.push_back(static_cast<std::size_t>(v - 1));
  }
  std::string ring = "Z";
  try {
    if (!j.at("x").empty()) ring = j["x"][0].at("ring").get<std::string>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("seed: ") + e.what());
  }
  if (ring == ring_traits<Gaussian>::name) {
    mutate_and_emit<Gaussian>(j, seq, out);
  } else {
    mutate_and_emit<Integer>(j, seq, out);
  }
}

// ---------------------------------------------------------------------------

struct TsysArgs {
  std::string example = "lie";
  std::string algebra = "A2";
  std::string gamma = "0,1;-1,0";
  std::string window = "-3:3";
  std::string spec_file;
  std::string boundary = "unit";
  std::string q = "-1";
  long kmax = 4;
  std::size_t periods = 2;
};

TSystemSpec tsys_spec(const TsysArgs& a) {
  if (!a.spec_file.empty()) return tsystem_from_json(read_json(a.spec_file));
  const auto w = split(a.window, ':');
  if (w.size() != 2) throw UsageError("--window must be j_min:j_max");
  const long lo = parse_long(w[0], "window"), hi = parse_long(w[1], "window");
  std::vector<long> q;
  for (const auto& item : split(a.q, ',')) q.push_back(parse_long(item, "q"));
  const auto b = a.boundary == "strict" ? Boundary::Strict : Boundary::Unit;
  if (a.example == "lie") return lie_tsystem(build_cartan(a.algebra), lo, hi, q, b);
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& row : split(a.gamma, ';')) {
    rows.emplace_back();
    for (const auto& v : split(row, ',')) rows.back().push_back(parse_long(v, "gamma entry"));
  }
  try {
    return quiver_tsystem(IntMatrix::from_rows(rows), lo, hi, q, b);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--gamma: ") + e.what());
  }
}

void cmd_tsys(const TsysArgs& a, const Output& out) {
  const auto spec = tsys_spec(a);
  const auto v = validate_spec(spec);
  Json doc = {{"spec", to_json(spec)}};
  std::vector<std::size_t> flagged;
  for (auto c : v.boundary_columns) flagged.push_back(c + 1);
  doc["validate"] = {{"nonnegative", v.nonnegative},
                     {"symmetric", v.symmetric},
                     {"commutation", v.commutation},
                     {"column_sums", v.column_sums},
                     {"boundary_columns", flagged}};
  std::string text = "validate: " + std::string(v.ok() ? "pass" : "FAIL") + " (" + std::to_string(flagged.size()) +
                     " boundary columns)\n";
  if (!v.ok()) {
    out.emit(doc, text);
    throw Mismatch("T-system spec violates an interior condition");
  }
  const auto w = bipartite_walk_check(spec, a.periods);
  doc["walk"] = {{"half_steps", w.half_steps},
                 {"matrix_entries_checked", w.matrix_entries_checked},
                 {"boundary_entries_differing", w.boundary_entries_differing},
                 {"boundary_exchange_pairs", w.boundary_exchange_pairs},
                 {"variables_compared", w.variables_compared},
                 {"boundary_variables", w.boundary_variables}};
  text += "walk: pass (" + std::to_string(w.half_steps) + " half steps, " + std::to_string(w.variables_compared) +
          " variables, " + std::to_string(w.matrix_entries_checked) + " matrix entries)\n";
  const auto p = t_polynomiality_check(spec, a.kmax);
  doc["polynomiality"] = {{"kmax", a.kmax}, {"checked", p.checked}, {"boundary_skipped", p.boundary_skipped}};
  text += "polynomiality: pass (" + std::to_string(p.checked) + " interior entries, k <= " + std::to_string(a.kmax) +
          ")\n";
  out.emit(doc, text);
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string suites;
  std::uint64_t rng_seed = kDefaultRngSeed;
};

int cmd_verify(const VerifyArgs& a, const Output& out) {
  std::vector<std::string> names = a.suites.empty() ? suite_names() : split(a.suites, ',');
  for (const auto& n : names) {
    if (std::find(suite_names().begin(), suite_names().end(), n) == suite_names().end()) {
      throw UsageError("unknown suite '" + n + "'");
    }
  }
  const auto results = run_suites(names, a.rng_seed);
  Json doc = {{"rng_seed", a.rng_seed}};
  Json list = Json::array();
  std::string text;
  bool ok = true;
  for (const auto& r : results) {
    ok &= r.pass;
    Json item = {{"suite", r.name}, {"pass", r.pass}};
    if (r.pass) {
      item["detail"] = r.detail;
    } else {
      item["failure"] = r.failure;
    }
    list.push_back(std::move(item));
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2f", r.seconds);
    text += r.name + ": " + (r.pass ? "pass" : "FAIL") + " (" + secs + " s)" +
            (r.pass ? "" : " " + r.failure) + "\n";
  }
  doc["suites"] = std::move(list);
  doc["pass"] = ok;
  out.emit(doc, text);
  if (!ok && out.format == "text") std::cerr << doc.dump(2) << "\n";
  return ok ? 0 : 1;
}

bool usage_error(const Error& e) {
  return dynamic_cast<const InvalidType*>(&e) || dynamic_cast<const ParseError*>(&e) ||
         dynamic_cast<const InvalidWindow*>(&e) || dynamic_cast<const RingMismatch*>(&e) ||
         dynamic_cast<const ArityMismatch*>(&e);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Q-systems, T-systems and their cluster algebras"};
  app.require_subcommand(1);
  Output out;
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", out.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--out", out.path, "write the document to PATH");
  };

  CharsArgs chars;
  auto* c = app.add_subcommand("chars", "character table Q_{alpha,k}, 0 <= k <= kmax");
  c->add_option("--algebra", chars.algebra, "type and rank, e.g. G2")->required();
  c->add_option("--kmax", chars.kmax, "largest k");
  c->add_option("--mode", chars.mode, "kr, generic or normalized")
      ->check(CLI::IsMember({"kr", "generic", "normalized"}));
  add_output(c);

  WalkArgs walk_args;
  auto* w = app.add_subcommand("walk", "walk the mutation schedule, asserting every exchange matrix");
  w->add_option("--algebra", walk_args.algebra, "type and rank")->required();
  w->add_option("--steps", walk_args.steps, "schedule steps")->required();
  w->add_option("--coefficients", walk_args.coefficients, "none, minus-one or symbolic")
      ->check(CLI::IsMember({"none", "minus-one", "symbolic"}));
  w->add_flag("--kr", walk_args.kr, "start at the KR point");
  add_output(w);

  MutateArgs mut;
  auto* m = app.add_subcommand("mutate", "mutate a seed file along a sequence of directions");
  m->add_option("--seed-file", mut.seed_file, "seed JSON")->required();
  m->add_option("--sequence", mut.sequence, "1-based directions, e.g. 1,2,1")->required();
  add_output(m);

  TsysArgs ts;
  auto* t = app.add_subcommand("tsys", "check a T-system: conditions, bipartite walk, polynomiality");
  t->add_option("--example", ts.example, "lie or quiver")->check(CLI::IsMember({"lie", "quiver"}));
  t->add_option("--algebra", ts.algebra, "simply-laced type for --example lie");
  t->add_option("--gamma", ts.gamma, "quiver matrix rows, e.g. '0,1;-1,0'");
  t->add_option("--window", ts.window, "j_min:j_max, e.g. --window=-2:2");
  t->add_option("--q", ts.q, "coefficients, one value or one per node");
  t->add_option("--boundary", ts.boundary, "unit or strict")->check(CLI::IsMember({"unit", "strict"}));
  t->add_option("--spec-file", ts.spec_file, "T-system spec JSON");
  t->add_option("--kmax", ts.kmax, "polynomiality depth");
  t->add_option("--periods", ts.periods, "walk periods");
  add_output(t);

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "run verification suites");
  v->add_option("--suites", ver.suites, "comma-separated subset of: " + [] {
    std::string s;
    for (const auto& n : suite_names()) s += (s.empty() ? "" : ",") + n;
    return s;
  }());
  v->add_option("--rng-seed", ver.rng_seed, "seed of the random path sample");
  add_output(v);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*c) cmd_chars(chars, out);
    if (*w) cmd_walk(walk_args, out);
    if (*m) cmd_mutate(mut, out);
    if (*t) cmd_tsys(ts, out);
    if (*v) return cmd_verify(ver, out);
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage_error(e) ? 2 : 1;
  }
}
