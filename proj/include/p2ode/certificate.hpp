#pragma once

// Machine-readable screening certificates and their append-only journal.

#include "p2ode/screen.hpp"

#include "json.hpp"

#include <mutex>
#include <string>

namespace p2ode {

inline constexpr const char* kToolVersion = "p2ode 1.0.0";
inline constexpr const char* kCertificateSchema = "p2ode.certificate/1";

/// Per-prime claim template; "r" and "p" are filled in per record.
inline constexpr const char* kSemantics = "no invariant curve of degree ≤ r with coefficients in \U0001D53D_p";

struct ScreenTargets {
  bool curves = true;
  bool fibers = false;
};

struct Certificate {
  std::string kind;          // "web" or "ode"
  std::string content_hash;  // sha256 of the canonical serialization
  int r = 1;
  std::vector<std::uint64_t> primes;
  ScreenTargets targets;
  std::vector<PrimeScreen> per_prime;
  std::optional<std::uint64_t> seed;
  std::string construction;
  nlohmann::json object;  // canonical input
  double wall_clock_s = 0;

  bool any_found() const;
  bool conclusive() const;
  /// 0 certified empty, 1 invariant object found, 2 inconclusive.
  int exit_code() const;
};

std::string sha256_hex(const std::string& data);

nlohmann::json canonical_json(const PlaneWeb<Rationals>& w);
nlohmann::json canonical_json(const SecondOrderODE<Rationals>& e);

/// Hash of the canonical input serialization (sorted keys, no whitespace).
std::string content_hash(const nlohmann::json& canonical);

Certificate screen_finite_field(const PlaneWeb<Rationals>& w, const ScreenOptions& opt, ScreenTargets targets = {});
Certificate screen_finite_field(const SecondOrderODE<Rationals>& e, const ScreenOptions& opt,
                                ScreenTargets targets = {});

nlohmann::json to_json(const Certificate& c);

/// The record without run-dependent fields (wall clock).
nlohmann::json reproducible_view(const nlohmann::json& record);

/// One JSON object per line. Appends are serialized within the process by
/// a mutex and across processes by an exclusive file lock. A record whose
/// (kind, hash, r, primes, targets) key is already present is not written
/// again.
class CertificateJournal {
 public:
  explicit CertificateJournal(std::string path) : path_(std::move(path)) {}

  enum class Append { Written, Duplicate };
  Append append(const Certificate& c);
  std::vector<nlohmann::json> records() const;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::mutex mu_;
};

}  // namespace p2ode
