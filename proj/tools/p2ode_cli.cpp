// p2ode: command-line front end.

#include "p2ode/parser.hpp"
#include "p2ode/witness.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace p2ode;
using nlohmann::json;

namespace {

constexpr int kErrorExit = 3;

const Rationals QQ;

struct Config {
  bool json_out = false;
  std::string primes;
  std::string journal;
  std::uint64_t seed = 1;
  int threads = 0;
};

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

std::vector<std::uint64_t> parse_primes(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw DomainError("empty entry in prime list '" + text + "'");
    item = item.substr(b, e - b + 1);
    std::size_t used = 0;
    unsigned long long p = 0;
    try {
      p = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw DomainError("'" + item + "' is not a number");
    if (!is_prime_u64(p)) throw DomainError(item + " is not prime");
    out.push_back(p);
  }
  if (out.empty()) throw DomainError("prime list is empty");
  return out;
}

Bidegree parse_bidegree(const std::string& text) {
  if (text == "L") return bundles::kLifted;
  if (text == "V") return bundles::kVertical;
  auto comma = text.find(',');
  if (comma == std::string::npos) throw DomainError("bidegree must be 'a,b', 'L' or 'V'");
  try {
    return {std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw DomainError("bad bidegree '" + text + "'");
  }
}

// File inputs report parse errors as path:line:col.
struct FileParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f(parse_key_values(read_text_file(path)));
  } catch (const ParseError& e) {
    throw FileParseError(path + ":" + e.what());
  }
}

SecondOrderODE<Rationals> load_ode(const std::string& path) { return with_path(path, ode_from_record); }
PlaneWeb<Rationals> load_web(const std::string& path) { return with_path(path, web_from_record); }

std::string point_str(const Point3<Rationals>& p) {
  return "[" + p[0].get_str() + " : " + p[1].get_str() + " : " + p[2].get_str() + "]";
}

json point_json(const Point3<Rationals>& p) { return json::array({p[0].get_str(), p[1].get_str(), p[2].get_str()}); }

json bidegree_json(Bidegree b) { return json::array({b.a, b.b}); }

std::string bidegree_str(Bidegree b) { return "O(" + std::to_string(b.a) + "," + std::to_string(b.b) + ")"; }

json chow_json(const ChowClass& c) {
  return json{{"class", c.to_string()}, {"coeffs", c.c}, {"degree", c.degree()}};
}

void emit(const Config& cfg, const json& j, const std::string& table) {
  if (cfg.json_out)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << table;
}

ScreenOptions screen_options(const Config& cfg, int r) {
  ScreenOptions opt;
  opt.r = r;
  opt.primes = parse_primes(cfg.primes);
  opt.threads = cfg.threads;
  return opt;
}

// ---------------------------------------------------------------------------

int cmd_dims(const Config& cfg, int a, int b) {
  bool extrapolated = false;
  auto h0 = dim_sections(a, b, &extrapolated);
  json j{{"a", a}, {"b", b}, {"sections", h0}};
  std::ostringstream t;
  t << "h0(O(" << a << "," << b << ")) = " << h0 << (extrapolated ? "  (outside a,b >= 0)" : "") << "\n";
  if (extrapolated) j["extrapolated"] = true;
  if (a >= 1 && b >= 1) {
    auto e = dim_ode_space(a, b);
    j["ode_space_dim"] = e;
    t << "dim E(" << a << "," << b << ") = " << e << "\n";
  }
  emit(cfg, j, t.str());
  return 0;
}

int cmd_chow(const Config& cfg, const std::string& expr) {
  ChowClass c = parse_chow(expr);
  json j = chow_json(c);
  j["input"] = expr;
  std::string t = c.to_string() + "\n";
  if (c.degree() == 3 || c.is_zero()) {
    auto n = c.is_zero() ? 0 : intersection_number(c);
    j["intersection_number"] = n;
    t += "degree = " + std::to_string(n) + "\n";
  }
  emit(cfg, j, t);
  return 0;
}

struct TangencyArgs {
  std::string bidegree, surface, curve, with, ode;
  std::int64_t euler = 2;
};

int cmd_tangency(const Config& cfg, const TangencyArgs& args) {
  Bidegree f;
  json j;
  std::ostringstream t;
  if (!args.ode.empty()) {
    auto e = load_ode(args.ode);
    std::mt19937_64 rng(cfg.seed);
    f = recover_bidegree(e, rng);
    j["declared"] = bidegree_json(e.bidegree());
    j["recovered"] = bidegree_json(f);
    t << "declared " << bidegree_str(e.bidegree()) << ", recovered from tangencies " << bidegree_str(f) << "\n";
  } else if (!args.bidegree.empty()) {
    f = parse_bidegree(args.bidegree);
  } else {
    throw DomainError("tangency needs --bidegree or --ode");
  }
  j["bidegree"] = bidegree_json(f);
  bool specific = false;
  if (!args.surface.empty()) {
    auto c = tangency_class_surface(f, parse_chow(args.surface));
    j["surface"] = chow_json(c);
    t << "tang(F, " << args.surface << ") = " << c.to_string() << "\n";
    specific = true;
  }
  if (!args.curve.empty()) {
    auto n = tangency_count_curve(f, parse_chow(args.curve), args.euler);
    j["curve"] = json{{"class", args.curve}, {"euler", args.euler}, {"count", n}};
    t << "tang(F, curve " << args.curve << ", euler " << args.euler << ") = " << n << "\n";
    specific = true;
  }
  if (!args.with.empty()) {
    auto g = parse_bidegree(args.with);
    auto c = tangency_class_pair(f, g);
    j["pair"] = json{{"with", bidegree_json(g)}, {"class", bidegree_json(c)}};
    t << "tang(F, " << bidegree_str(g) << ") = " << bidegree_str(c) << "\n";
    specific = true;
  }
  if (!specific) {
    auto line = tangency_count_curve(f, ChowClass::hv() * ChowClass::hv(), 2);
    auto fiber = tangency_count_curve(f, ChowClass::h2(), 2);
    auto tl = tangency_class_pair(f, bundles::kLifted), tv = tangency_class_pair(f, bundles::kVertical);
    j["lifted_line"] = line;
    j["fiber"] = fiber;
    j["with_L"] = bidegree_json(tl);
    j["with_V"] = bidegree_json(tv);
    t << "T*F = " << bidegree_str(f) << "\n"
      << "tangencies with a lifted line: " << line << "\n"
      << "tangencies with a fiber:       " << fiber << "\n"
      << "tang(F, L) = " << bidegree_str(tl) << "\n"
      << "tang(F, V) = " << bidegree_str(tv) << "\n";
  }
  emit(cfg, j, t.str());
  return 0;
}

int cmd_verify(const Config& cfg, const std::string& ode, const std::string& web, const std::string& curve) {
  QPoly G = parse_curve(curve);
  json j{{"curve", G.to_string()}};
  std::string t;
  if (!ode.empty()) {
    bool ok = is_solution_ode(load_ode(ode), G);
    j["kind"] = "ode";
    j["solution"] = ok;
    t = ok ? "solution\n" : "not a solution\n";
  } else {
    auto res = is_invariant_curve_web(load_web(web), G);
    j["kind"] = "web";
    j["invariant"] = res.invariant;
    if (res.cofactor) j["cofactor"] = res.cofactor->to_string();
    t = res.invariant ? "invariant, cofactor " + res.cofactor->to_string() + "\n" : "not invariant\n";
  }
  emit(cfg, j, t);
  return 0;
}

template <class Lines>
void lines_output(const Config& cfg, json j, bool family, std::int64_t count, const Lines& lines) {
  std::ostringstream t;
  j["family"] = family;
  if (count >= 0) j["count"] = count;
  json arr = json::array();
  for (const auto& L : lines)
    arr.push_back(json{{"coords", point_json(L)}, {"equation", line_equation(QQ, L).to_string()}});
  j["lines"] = arr;
  if (family) t << "one-parameter family of invariant lines\n";
  if (count >= 0) t << count << " invariant lines with multiplicity\n";
  t << lines.size() << (family ? " further isolated" : "") << " rational line(s)\n";
  for (const auto& L : lines) t << "  " << point_str(L) << "  " << line_equation(QQ, L).to_string() << " = 0\n";
  emit(cfg, j, t.str());
}

int cmd_lines(const Config& cfg, const std::string& ode, const std::string& web) {
  std::mt19937_64 rng(cfg.seed);
  if (!ode.empty()) {
    auto sol = find_invariant_lines_ode(load_ode(ode), rng);
    lines_output(cfg, json{{"kind", "ode"}}, sol.family, -1, sol.lines);
  } else {
    auto sol = invariant_lines_of_web(load_web(web), rng);
    lines_output(cfg, json{{"kind", "web"}}, sol.family, sol.count, sol.lines);
  }
  return 0;
}

int cmd_dualize(const Config& cfg, const std::string& curve, const std::string& web) {
  json j;
  std::ostringstream t;
  if (!curve.empty()) {
    auto dw = dual_web_of_curve(parse_curve(curve));
    j = json{{"kind", "curve"},
             {"k", dw.web.k},
             {"d", dw.web.d},
             {"section", dw.web.section.to_string()},
             {"chart", dw.web.chart().to_string()},
             {"has_linear_factor", dw.has_linear_factor}};
    t << dw.web.k << "-web of degree " << dw.web.d << " on the dual plane\n"
      << "section: " << dw.web.section.to_string() << "\n"
      << "chart:   " << dw.web.chart().to_string() << "\n";
    if (dw.has_linear_factor) t << "note: the curve contains a rational line\n";
  } else {
    auto w = load_web(web);
    if (w.d != 1) throw DomainError("dualize --web needs a web of degree 1");
    auto fol = dual_foliation_of_degree1_web(w);
    std::mt19937_64 rng(cfg.seed);
    bool saturated = is_saturated(fol);
    bool round_trip = web_of_foliation(fol).section == w.section;
    json X = json::array();
    for (const auto& c : fol.X) X.push_back(c.to_string());
    j = json{{"kind", "web"}, {"k", fol.k}, {"X", X}, {"saturated", saturated}, {"round_trip", round_trip}};
    t << "degree-" << fol.k << " foliation on the dual plane (a0, a1, a2):\n";
    for (int i = 0; i < 3; ++i) t << "  X" << i << " = " << fol.X[i].to_string() << "\n";
    t << "round trip W -> F_W -> W: " << (round_trip ? "identity" : "MISMATCH") << "\n";
    if (saturated) {
      auto rep = singularity_count(fol, rng);
      j["degenerate"] = rep.degenerate;
      if (!rep.degenerate) {
        j["singularities"] = rep.count;
        j["expected"] = fol.k * fol.k + fol.k + 1;
        t << "singularities with multiplicity: " << rep.count << " (k^2+k+1 = " << fol.k * fol.k + fol.k + 1
          << ")\n";
      } else {
        t << "non-isolated singularities\n";
      }
    } else {
      t << "not saturated\n";
    }
  }
  emit(cfg, j, t.str());
  return 0;
}

std::string certificate_table(const Certificate& c) {
  std::ostringstream t;
  t << c.kind << " " << c.content_hash.substr(0, 16) << "  r=" << c.r << "\n";
  for (const auto& p : c.per_prime) {
    t << "  F_" << p.prime << ": " << to_string(p.status);
    if (p.status == PrimeStatus::Ok && c.targets.curves)
      t << ", " << p.enumerated << " curves enumerated, " << p.exact_checks << " exact checks, " << p.found.size()
        << " invariant";
    if (p.fibers_screened) t << ", " << p.fibers.size() << " invariant fibers";
    if (!p.note.empty()) t << " (" << p.note << ")";
    t << "\n";
    for (const auto& f : p.found) t << "    " << f.equation << " = 0\n";
  }
  const char* verdict[] = {"none found", "found", "inconclusive"};
  t << "  result: " << verdict[c.exit_code()] << "\n";
  return t.str();
}

// Appends to the journal and reports duplicates on stderr.
json journal_append(const std::string& path, const Certificate& c) {
  if (path.empty()) return json{{"journal", nullptr}};
  CertificateJournal jr(path);
  bool dup = jr.append(c) == CertificateJournal::Append::Duplicate;
  if (dup) std::cerr << "already certified: " << c.kind << " " << c.content_hash << " (r=" << c.r << ")\n";
  return json{{"journal", path}, {"status", dup ? "already certified" : "written"}};
}

int cmd_screen(const Config& cfg, const std::string& ode, const std::string& web, int r, bool fibers) {
  ScreenOptions opt = screen_options(cfg, r);
  ScreenTargets targets{true, fibers};
  Certificate c = !ode.empty() ? screen_finite_field(load_ode(ode), opt, targets)
                               : screen_finite_field(load_web(web), opt, targets);
  json store = journal_append(cfg.journal, c);
  json j = to_json(c);
  j["store"] = store;
  emit(cfg, j, certificate_table(c));
  return c.exit_code();
}

std::string ode_record(const SecondOrderODE<Rationals>& e, const std::string& comment) {
  std::ostringstream os;
  os << "# " << comment << "\n"
     << "a = " << e.a << "\n"
     << "b = " << e.b << "\n"
     << "F1 = \"" << e.F1.poly.to_string() << "\"\n"
     << "F2 = \"" << e.F2.poly.to_string() << "\"\n";
  return os.str();
}

int cmd_witness(const Config& cfg, int a, int b, int r, const std::string& mode_s, std::string out) {
  WitnessMode mode = mode_s == "L" ? WitnessMode::L : WitnessMode::V;
  auto res = genericity_witness(a, b, r, cfg.seed, mode, screen_options(cfg, r));
  if (out.empty())
    out = "witness_E" + std::to_string(a) + "_" + std::to_string(b) + "_" + mode_s + "_seed" + std::to_string(cfg.seed) +
          ".ode";
  {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << ode_record(res.ode, res.ode_certificate.construction + ", seed " + std::to_string(cfg.seed));
  }
  std::string journal = cfg.journal.empty() ? std::string("certificates.jsonl") : cfg.journal;
  json j{{"ode_file", out},
         {"mode", mode_s},
         {"attempts", res.attempts},
         {"web_certificate", to_json(res.web_certificate)},
         {"ode_certificate", to_json(res.ode_certificate)},
         {"store", json::array({journal_append(journal, res.web_certificate), journal_append(journal, res.ode_certificate)})},
         {"exit_code", res.exit_code()}};
  std::ostringstream t;
  t << "equation in E(" << a << "," << b << ") written to " << out << " (attempt " << res.attempts << ")\n"
    << "web:      " << certificate_table(res.web_certificate) << "equation: " << certificate_table(res.ode_certificate)
    << "certificates journal: " << journal << "\n";
  emit(cfg, j, t.str());
  return res.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second-order ODEs and webs on P^2: dimensions, tangency classes, invariant curves, certificates"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  cfg.primes = env_or("P2ODE_PRIMES", "5,7");
  cfg.journal = env_or("P2ODE_JOURNAL", "");
  app.add_flag("--json", cfg.json_out, "Machine-readable JSON output");
  app.add_option("--primes", cfg.primes, "Comma-separated primes for screening (env P2ODE_PRIMES)");
  app.add_option("--journal", cfg.journal, "Certificate journal path (env P2ODE_JOURNAL)");
  app.add_option("--seed", cfg.seed, "Seed for every random draw")->capture_default_str();
  app.add_option("--threads", cfg.threads, "Screening threads, 0 = hardware")->check(CLI::NonNegativeNumber);

  int a = 0, b = 0, r = 1;
  std::string expr, ode, web, curve, mode = "V", out;
  bool fibers = false;
  TangencyArgs targs;

  auto* dims = app.add_subcommand("dims", "h0(O(a,b)) and dim E(a,b)");
  dims->add_option("--a", a)->required();
  dims->add_option("--b", b)->required();

  auto* chow = app.add_subcommand("chow", "Normal form of an expression in h, hv, pt");
  chow->add_option("expr", expr)->required();

  auto* tang = app.add_subcommand("tangency", "Tangency classes and counts for a bidegree or an equation");
  auto* tb = tang->add_option("--bidegree", targs.bidegree, "a,b or L or V");
  auto* to = tang->add_option("--ode", targs.ode, "Recover the bidegree of an equation file");
  tb->excludes(to);
  tang->add_option("--surface", targs.surface, "Divisor class T, e.g. h");
  tang->add_option("--curve", targs.curve, "Curve class tangent to the contact distribution, e.g. h^2");
  tang->add_option("--euler", targs.euler, "Euler characteristic of that curve")->capture_default_str();
  tang->add_option("--with", targs.with, "Second bidegree for the pair tangency class");

  auto add_input = [&](CLI::App* sc) {
    auto* o = sc->add_option("--ode", ode, "Equation record file")->check(CLI::ExistingFile);
    auto* w = sc->add_option("--web", web, "Web record file")->check(CLI::ExistingFile);
    o->excludes(w);
    return std::pair{o, w};
  };

  auto* verify = app.add_subcommand("verify", "Decide whether a curve solves an equation or is invariant by a web");
  auto [vo, vw] = add_input(verify);
  verify->add_option("--curve", curve, "Curve in X0,X1,X2 or x,y")->required();

  auto* lines = app.add_subcommand("lines", "Invariant lines of an equation or a web");
  auto [lo, lw] = add_input(lines);

  auto* dual = app.add_subcommand("dualize", "Dual web of a curve, or dual foliation of a degree-1 web");
  auto* dc = dual->add_option("--curve", curve, "Curve in X0,X1,X2 or x,y");
  auto* dw = dual->add_option("--web", web, "Degree-1 web record file")->check(CLI::ExistingFile);
  dc->excludes(dw);

  auto* screen = app.add_subcommand("screen", "Finite-field screening for invariant curves of degree <= r");
  auto [so, sw] = add_input(screen);
  screen->add_option("--r", r, "Degree bound")->check(CLI::PositiveNumber)->capture_default_str();
  screen->add_flag("--fibers", fibers, "Also list invariant fibers");

  auto* wit = app.add_subcommand("witness", "Seeded equation with a screening certificate");
  wit->add_option("--a", a)->required();
  wit->add_option("--b", b)->required();
  wit->add_option("--r", r, "Degree bound")->check(CLI::PositiveNumber)->capture_default_str();
  wit->add_option("--mode", mode, "V or L construction")->check(CLI::IsMember({"V", "L"}))->capture_default_str();
  wit->add_option("--out", out, "Equation file to write");

  CLI11_PARSE(app, argc, argv);

  auto need_input = [](CLI::Option* o, CLI::Option* w) {
    if (!*o && !*w) throw DomainError("give --ode FILE or --web FILE");
  };
  try {
    if (*dims) return cmd_dims(cfg, a, b);
    if (*chow) return cmd_chow(cfg, expr);
    if (*tang) return cmd_tangency(cfg, targs);
    if (*verify) {
      need_input(vo, vw);
      return cmd_verify(cfg, ode, web, curve);
    }
    if (*lines) {
      need_input(lo, lw);
      return cmd_lines(cfg, ode, web);
    }
    if (*dual) {
      if (!*dc && !*dw) throw DomainError("give --curve EXPR or --web FILE");
      return cmd_dualize(cfg, curve, web);
    }
    if (*screen) {
      need_input(so, sw);
      return cmd_screen(cfg, ode, web, r, fibers);
    }
    if (*wit) return cmd_witness(cfg, a, b, r, mode, out);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kErrorExit;
  } catch (const FileParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kErrorExit;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kErrorExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kErrorExit;
  }
  return kErrorExit;
}
