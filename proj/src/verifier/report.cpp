#include <omp.h>

#include <cctype>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "stablegl/centralizer.hpp"
#include "stablegl/error.hpp"
#include "stablegl/folang/domains.hpp"
#include "stablegl/folang/eval.hpp"
#include "stablegl/verifier.hpp"

namespace stablegl::verify {

namespace {

// Entries outside the leading 2x2 block: off-diagonal zero, diagonal equal to
// `diagonal` (nullopt: any common value).
bool outside_block_scalar(const Dense& m, std::optional<Code> diagonal) {
  const int n = m.rows();
  std::optional<Code> seen = diagonal;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i < 2 && j < 2) continue;
      if (i != j) {
        if (m.at(i, j)) return false;
        continue;
      }
      if (!seen) seen = m.at(i, j);
      if (m.at(i, j) != *seen) return false;
    }
  return true;
}

// The theta-satisfying canonical matrices: the order-3 2x2 canonical block
// placed at coordinates (k, k+1), 3 <= k <= m.
std::vector<StableMatrix> theta_matrices(const Field& f, int m) {
  std::vector<StableMatrix> out;
  const RootCase rc = root_case(*f);
  for (int k = 3; k <= m; ++k) {
    if (rc == RootCase::NoXi) {
      out.push_back(g_k(f, k));
    } else {
      std::vector<Code> d(static_cast<std::size_t>(k + 1), 1);
      d[static_cast<std::size_t>(k - 1)] = f->xi();
      d[static_cast<std::size_t>(k)] = f->mul(f->xi(), f->xi());
      out.push_back(diag(f, d));
    }
  }
  return out;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : text) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if ((ch == ',' || std::isspace(static_cast<unsigned char>(ch))) && depth == 0) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
      continue;
    }
    cur += ch;
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size() || v < 0) throw Error("");
    return v;
  } catch (...) {
    throw Error("config key '" + key + "' needs a non-negative integer, got '" + value + "'");
  }
}

}  // namespace

Gl2Definability gl2_centralizer(const Field& f, int m, bool exclude_last) {
  if (m < 6) throw Error("gl2 definability needs m >= 6");
  std::vector<StableMatrix> gens;
  for (int k = 3; k <= (exclude_last ? m - 1 : m); ++k) gens.push_back(g_k(f, k));
  Gl2Definability r;
  r.m = m;
  r.last_excluded = exclude_last;
  const auto thetas = theta_matrices(f, m);
  if (exclude_last) {
    const auto basis = centralizer_basis(f, gens, m);
    r.dimension = static_cast<int>(basis.size());
    r.pattern_holds = true;
    for (const auto& b : basis) r.pattern_holds = r.pattern_holds && outside_block_scalar(b, std::nullopt);
    return r;
  }
  const auto affine = stable_centralizer(f, gens, m);
  if (!affine) return r;
  r.dimension = static_cast<int>(affine->directions.size());
  r.pattern_holds = outside_block_scalar(affine->particular, Code(1));
  for (const auto& d : affine->directions) r.pattern_holds = r.pattern_holds && outside_block_scalar(d, Code(0));
  const auto total = fol::span_size(*f, affine->directions.size(), 1'000'000);
  if (!total) throw BudgetExceeded("GL_2 centralizer enumeration exceeds budget");
  std::vector<StableMatrix> members;
  for (std::uint64_t idx = 0; idx < *total; ++idx) {
    const Dense x = span_element(affine->directions, affine->particular, idx);
    if (determinant(x) != 0) members.push_back(StableMatrix::from_dense(x));
  }
  r.invertible_count = members.size();
  std::sort(members.begin(), members.end());
  r.commutes_with_theta = true;
  for (const auto& x : members)
    for (const auto& t : thetas) r.commutes_with_theta = r.commutes_with_theta && commute(x, t);
  // Closure: all pairs when small, a fixed stride sample otherwise.
  r.closed_under_products = true;
  const std::size_t stride = members.size() <= 200 ? 1 : members.size() / 97;
  for (std::size_t i = 0; i < members.size(); i += stride)
    for (std::size_t j = 0; j < members.size(); j += stride) {
      const StableMatrix p = members[i] * members[j];
      r.closed_under_products =
          r.closed_under_products && p.support() <= 2 && std::binary_search(members.begin(), members.end(), p);
    }
  return r;
}

LemmaReport check_gl2_definability(const Field& f, int m) {
  LemmaReport report;
  report.id = "L-GAMMA";
  report.field = f->name();
  report.support = m;
  const auto inc = gl2_centralizer(f, m, false);
  const auto exc = gl2_centralizer(f, m, true);
  const std::uint64_t q = f->order();
  const std::uint64_t expected = (q * q - 1) * (q * q - q);
  Json& ev = report.evidence;
  ev["included"] = {{"dimension", inc.dimension},     {"pattern", "diag[M0, I]"},
                    {"pattern_holds", inc.pattern_holds}, {"invertible_count", inc.invertible_count},
                    {"expected_count", expected},      {"closed_under_products", inc.closed_under_products},
                    {"commutes_with_theta", inc.commutes_with_theta}};
  ev["excluded"] = {{"dimension", exc.dimension}, {"pattern", "diag[M0, a I]"}, {"pattern_holds", exc.pattern_holds}};
  const bool ok = inc.dimension == 4 && inc.pattern_holds && inc.invertible_count == expected &&
                  inc.closed_under_products && inc.commutes_with_theta && exc.dimension == 5 &&
                  exc.pattern_holds;
  report.verdict = ok ? Verdict::Confirmed : Verdict::Refuted;
  return report;
}

RootCase detect_case(const Field& f, int n) {
  if (n < 8) throw SupportTooSmall("detect_case needs witness bound >= 8");
  fol::EvalOptions o;
  o.witness_bound = n;
  const std::string sentence = "exists A in order3 @" + std::to_string(n / 2) + " uptoconj: phi(A)";
  return fol::eval(sentence, f, {}, o).value ? RootCase::HasXi : RootCase::NoXi;
}

Config default_config() {
  Config c;
  c.fields = {field_make(1), field_make(2), field_make(3)};
  return c;
}

Config parse_config(std::string_view text) {
  Config c = default_config();
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key == "fields") {
      c.fields.clear();
      for (const auto& item : split_list(value)) c.fields.push_back(parse_field(item));
    } else if (key == "lemmas") {
      c.ids.clear();
      for (const auto& item : split_list(value))
        if (item != "all") c.ids.push_back(lemma(item).id);
    } else if (key == "support") {
      c.support = static_cast<int>(parse_int(key, value));
    } else if (key == "witness_bound") {
      c.witness_bound = static_cast<int>(parse_int(key, value));
    } else if (key == "budget") {
      c.budget = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "workers") {
      c.workers = static_cast<int>(parse_int(key, value));
    } else if (key == "bound_offset") {
      c.bound_offset = static_cast<int>(parse_int(key, value));
    } else {
      throw Error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return c;
}

std::vector<LemmaReport> run_all(const Config& config) {
  std::vector<LemmaCheck> jobs;
  std::vector<std::string> ids = config.ids;
  if (ids.empty())
    for (const auto& l : lemmas()) ids.push_back(l.id);
  for (const auto& id : ids)
    for (const auto& f : config.fields) {
      const LemmaInfo& info = lemma(id);
      std::vector<Variant> variants{Variant::Corrected};
      if (info.has_variants) variants = {Variant::Literal, Variant::Corrected};
      for (auto v : variants) {
        LemmaCheck c;
        c.id = info.id;
        c.field = f;
        c.support = config.support;
        c.witness_bound = config.witness_bound;
        c.variant = v;
        c.budget = config.budget;
        c.bound_offset = config.bound_offset;
        jobs.push_back(c);
      }
    }
  const int pool = std::min<int>(fol::resolve_workers(config.workers), static_cast<int>(jobs.size()));
  for (auto& j : jobs) j.workers = pool > 1 ? 1 : config.workers;
  std::vector<LemmaReport> out(jobs.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(pool, 1))
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      out[i] = verify_lemma(jobs[i]);
    } catch (...) {
#pragma omp critical(stablegl_run_all_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

Json to_json(const LemmaReport& r) {
  return {{"id", r.id},
          {"field", r.field},
          {"variant", fol::to_string(r.variant)},
          {"bounds", {{"support", r.support}, {"witness_bound", r.witness_bound}}},
          {"verdict", to_string(r.verdict)},
          {"note", r.note},
          {"evidence", r.evidence},
          {"millis", std::round(r.millis * 1000) / 1000}};
}

Json to_json(const std::vector<LemmaReport>& reports) {
  Json list = Json::array();
  for (const auto& r : reports) list.push_back(to_json(r));
  return {{"reports", list}, {"all_corrected_confirmed", all_corrected_confirmed(reports)}};
}

std::string emit_text(const std::vector<LemmaReport>& reports) {
  std::ostringstream out;
  out << std::left << std::setw(10) << "id" << std::setw(9) << "field" << std::setw(11) << "variant"
      << std::setw(17) << "verdict" << std::setw(8) << "support" << std::setw(7) << "bound" << std::right
      << std::setw(10) << "millis" << "  note\n";
  for (const auto& r : reports) {
    out << std::left << std::setw(10) << r.id << std::setw(9) << r.field << std::setw(11)
        << fol::to_string(r.variant) << std::setw(17) << to_string(r.verdict) << std::setw(8) << r.support
        << std::setw(7) << r.witness_bound << std::right << std::setw(10) << std::fixed << std::setprecision(1)
        << r.millis << "  " << r.note << "\n";
  }
  out << (all_corrected_confirmed(reports) ? "all corrected checks confirmed\n"
                                           : "some corrected checks did not confirm\n");
  return out.str();
}

bool all_corrected_confirmed(const std::vector<LemmaReport>& reports) {
  for (const auto& r : reports)
    if (r.variant == Variant::Corrected && r.verdict != Verdict::Confirmed && r.verdict != Verdict::NotApplicable)
      return false;
  return true;
}

}  // namespace stablegl::verify
