#include "p2ode/certificate.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <fcntl.h>
#include <fstream>
#include <sstream>
#include <sys/file.h>
#include <unistd.h>

namespace p2ode {

using nlohmann::json;

bool Certificate::any_found() const {
  for (const auto& p : per_prime)
    if (!p.found.empty() || !p.fibers.empty()) return true;
  return false;
}

bool Certificate::conclusive() const {
  for (const auto& p : per_prime)
    if (p.status != PrimeStatus::Ok) return false;
  return !per_prime.empty();
}

int Certificate::exit_code() const {
  if (any_found()) return 1;
  return conclusive() ? 0 : 2;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

namespace {

json terms_json(const QPoly& f) {
  json arr = json::array();
  for (const auto& [m, c] : f.terms()) {
    json ex = json::array();
    for (std::size_t i = 0; i < f.nvars(); ++i) ex.push_back(m.exp[i]);
    arr.push_back(json{{"exp", ex}, {"coeff", c.get_str()}});
  }
  return arr;
}

std::string semantics_for(int r, std::uint64_t p) {
  return "no invariant curve of degree ≤ " + std::to_string(r) + " with coefficients in \U0001D53D_" +
         std::to_string(p);
}

template <class Reduce, class Screen>
Certificate run(const std::string& kind, const json& canonical, const ScreenOptions& opt, ScreenTargets targets,
                Reduce reduce, Screen screen) {
  auto t0 = std::chrono::steady_clock::now();
  Certificate c;
  c.kind = kind;
  c.object = canonical;
  c.content_hash = content_hash(canonical);
  c.r = opt.r;
  c.primes = opt.primes;
  c.targets = targets;
  for (std::uint64_t p : opt.primes) {
    PrimeField F(p);
    PrimeScreen ps;
    ps.prime = p;
    if (!reduce(F, ps)) {
      ps.status = PrimeStatus::BadReduction;
      c.per_prime.push_back(std::move(ps));
      continue;
    }
    screen(F, ps);
    c.per_prime.push_back(std::move(ps));
  }
  c.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

}  // namespace

json canonical_json(const PlaneWeb<Rationals>& w) {
  return json{{"type", "web"}, {"k", w.k}, {"d", w.d}, {"vars", "X0,X1,X2,A0,A1,A2"}, {"section", terms_json(w.section.poly)}};
}

json canonical_json(const SecondOrderODE<Rationals>& e) {
  return json{{"type", "ode"},
              {"a", e.a},
              {"b", e.b},
              {"vars", "X0,X1,X2,A0,A1,A2"},
              {"F1", terms_json(e.F1.poly)},
              {"F2", terms_json(e.F2.poly)}};
}

std::string content_hash(const json& canonical) { return sha256_hex(canonical.dump()); }

Certificate screen_finite_field(const PlaneWeb<Rationals>& w, const ScreenOptions& opt, ScreenTargets targets) {
  std::optional<BiHomPoly<PrimeField>> s;
  return run(
      "web", canonical_json(w), opt, targets,
      [&](const PrimeField& F, PrimeScreen& ps) {
        s = reduce_mod(w.section, F);
        if (!s) ps.note = "a denominator vanishes mod p";
        else if (s->is_zero()) ps.note = "section vanishes mod p";
        return s && !s->is_zero();
      },
      [&](const PrimeField&, PrimeScreen& ps) {
        if (targets.curves) ps = screen_web_mod_p(*s, opt);
        if (targets.fibers) {
          ps.fibers = invariant_fibers_mod_p(*s);
          ps.fibers_screened = true;
        }
      });
}

Certificate screen_finite_field(const SecondOrderODE<Rationals>& e, const ScreenOptions& opt, ScreenTargets targets) {
  std::optional<SecondOrderODE<PrimeField>> ep;
  return run(
      "ode", canonical_json(e), opt, targets,
      [&](const PrimeField& F, PrimeScreen& ps) {
        auto f1 = reduce_mod(e.F1, F), f2 = reduce_mod(e.F2, F);
        if (!f1 || !f2) {
          ps.note = "a denominator vanishes mod p";
          return false;
        }
        if (f1->is_zero() && f2->is_zero()) {
          ps.note = "equation vanishes mod p";
          return false;
        }
        ep = SecondOrderODE<PrimeField>{e.a, e.b, *f1, *f2};
        return true;
      },
      [&](const PrimeField&, PrimeScreen& ps) {
        if (targets.curves) ps = screen_ode_mod_p(*ep, opt);
        if (targets.fibers) {
          // A fiber is a leaf exactly when F1 vanishes along it.
          ps.fibers = invariant_fibers_mod_p(ep->F1);
          ps.fibers_screened = true;
        }
      });
}

json to_json(const Certificate& c) {
  json per = json::array();
  for (const auto& p : c.per_prime) {
    json found = json::array();
    for (const auto& f : p.found) found.push_back(json{{"degree", f.degree}, {"coeffs", f.coeffs}, {"equation", f.equation}});
    json rec{{"prime", p.prime},
             {"status", to_string(p.status)},
             {"enumerated", p.enumerated},
             {"exact_checks", p.exact_checks},
             {"skipped_nonreduced", p.skipped_nonreduced},
             {"found", found}};
    if (p.fibers_screened) {
      json fib = json::array();
      for (const auto& pt : p.fibers) fib.push_back(json::array({pt[0], pt[1], pt[2]}));
      rec["invariant_fibers"] = fib;
    }
    if (c.targets.curves && p.status == PrimeStatus::Ok && p.found.empty()) rec["semantics"] = semantics_for(c.r, p.prime);
    if (!p.note.empty()) rec["note"] = p.note;
    per.push_back(rec);
  }
  json targets = json::array();
  if (c.targets.curves) targets.push_back("curves");
  if (c.targets.fibers) targets.push_back("fibers");
  json out{{"schema", kCertificateSchema},
           {"kind", c.kind},
           {"content_hash", c.content_hash},
           {"r", c.r},
           {"primes", c.primes},
           {"targets", targets},
           {"per_prime", per},
           {"semantics", kSemantics},
           {"tool_version", kToolVersion},
           {"wall_clock_s", c.wall_clock_s},
           {"exit_code", c.exit_code()},
           {"object", c.object}};
  if (c.seed) out["seed"] = *c.seed;
  if (!c.construction.empty()) out["construction"] = c.construction;
  return out;
}

json reproducible_view(const json& record) {
  json r = record;
  r.erase("wall_clock_s");
  return r;
}

namespace {

json dedup_key(const json& rec) {
  return json{{"kind", rec.value("kind", "")},
              {"content_hash", rec.value("content_hash", "")},
              {"r", rec.value("r", 0)},
              {"primes", rec.value("primes", json::array())},
              {"targets", rec.value("targets", json::array())}};
}

struct FdGuard {
  int fd;
  ~FdGuard() {
    if (fd >= 0) {
      flock(fd, LOCK_UN);
      close(fd);
    }
  }
};

}  // namespace

CertificateJournal::Append CertificateJournal::append(const Certificate& c) {
  const json rec = to_json(c);
  const json key = dedup_key(rec);
  std::lock_guard lock(mu_);
  FdGuard g{open(path_.c_str(), O_RDWR | O_CREAT | O_APPEND, 0644)};
  if (g.fd < 0) throw std::runtime_error("cannot open journal " + path_);
  if (flock(g.fd, LOCK_EX) != 0) throw std::runtime_error("cannot lock journal " + path_);
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = json::parse(line, nullptr, false);
    if (!j.is_discarded() && dedup_key(j) == key) return Append::Duplicate;
  }
  std::string text = rec.dump() + "\n";
  for (std::size_t off = 0; off < text.size();) {
    ssize_t n = write(g.fd, text.data() + off, text.size() - off);
    if (n < 0) throw std::runtime_error("write to journal failed");
    off += static_cast<std::size_t>(n);
  }
  return Append::Written;
}

std::vector<json> CertificateJournal::records() const {
  std::vector<json> out;
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(json::parse(line));
  return out;
}

}  // namespace p2ode
