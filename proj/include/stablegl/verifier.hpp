#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "stablegl/folang/macros.hpp"
#include "stablegl/order3.hpp"

namespace stablegl::verify {

using Json = nlohmann::ordered_json;
using fol::Variant;

enum class Verdict { Confirmed, Refuted, BudgetExceeded, NotApplicable };

std::string to_string(Verdict v);
Verdict parse_verdict(std::string_view text);

struct LemmaInfo {
  std::string id;
  std::string claim;
  // The id has a literal and a corrected reading that are checked separately.
  bool has_variants = false;
};

// The 13 ids in report order.
const std::vector<LemmaInfo>& lemmas();
// Throws UnknownName.
const LemmaInfo& lemma(std::string_view id);

// Zero bounds select the id's own defaults.
struct LemmaCheck {
  std::string id;
  Field field;
  int support = 0;
  int witness_bound = 0;
  Variant variant = Variant::Corrected;
  std::uint64_t budget = 100'000'000;
  int workers = 0;
  // Added to each default witness bound (not to explicit ones).
  int bound_offset = 0;
};

struct LemmaReport {
  std::string id;
  std::string field;
  Variant variant = Variant::Corrected;
  int support = 0;
  int witness_bound = 0;
  Verdict verdict = Verdict::NotApplicable;
  std::string note;
  // Matrices are stored in the "over gf(q); [[...]]" literal form. Shared keys:
  // "certificates": [{u, a, b}] with a = u b u^-1;
  // "products": [{factors: [..], product}] with the product in factor order;
  // "pairwise_non_conjugate": [[m, ...], ...].
  Json evidence = Json::object();
  double millis = 0;
};

// Throws UnknownName for an unknown id; budget overruns become a
// BudgetExceeded verdict.
LemmaReport verify_lemma(const LemmaCheck& check);

struct Gl2Definability {
  int m = 0;
  bool last_excluded = false;
  int dimension = 0;
  bool pattern_holds = false;         // diag[M0, I] or, excluded, diag[M0, a I]
  std::uint64_t invertible_count = 0;  // included case only
  bool closed_under_products = false;
  bool commutes_with_theta = false;
};

// The stable centralizer of {G_k : 3 <= k <= m} (G_m dropped when
// exclude_last) at support m. Throws Error when m < 6.
Gl2Definability gl2_centralizer(const Field& f, int m, bool exclude_last);
LemmaReport check_gl2_definability(const Field& f, int m);

// Decides whether a primitive cube root of unity exists from group data only:
// some order-3 A != E has exactly two classes of products of commuting
// conjugates. Throws SupportTooSmall when n < 8.
RootCase detect_case(const Field& f, int n = 8);

struct Config {
  std::vector<Field> fields;
  std::vector<std::string> ids;  // empty: every id
  int support = 0;
  int witness_bound = 0;
  std::uint64_t budget = 100'000'000;
  int workers = 0;
  // Push every default witness bound up by this much (stability runs).
  int bound_offset = 0;
};

Config default_config();
// "key = value" lines; '#' starts a comment. Keys: fields, lemmas, support,
// witness_bound, budget, workers, bound_offset. Throws Error.
Config parse_config(std::string_view text);

std::vector<LemmaReport> run_all(const Config& config);

Json to_json(const LemmaReport& r);
// {"reports": [...], "all_corrected_confirmed": bool}
Json to_json(const std::vector<LemmaReport>& reports);
std::string emit_text(const std::vector<LemmaReport>& reports);
// Every corrected-variant report is confirmed or not applicable.
bool all_corrected_confirmed(const std::vector<LemmaReport>& reports);

}  // namespace stablegl::verify
