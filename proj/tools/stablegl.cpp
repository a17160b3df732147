// stablegl: batch front end for the verifier, the formula evaluator, order-3
// canonical forms and product class counts.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "stablegl/error.hpp"
#include "stablegl/folang/eval.hpp"
#include "stablegl/folang/parser.hpp"
#include "stablegl/frobenius.hpp"
#include "stablegl/verifier.hpp"

using namespace stablegl;
using verify::Json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void print(const Json& doc, const std::string& format, const std::string& text) {
  if (format == "json")
    std::cout << doc.dump(2) << "\n";
  else
    std::cout << text;
}

Json assignment_json(const fol::Assignment& a) {
  Json out = Json::object();
  for (const auto& [name, m] : a) out[name] = m.to_string();
  return out;
}

struct VerifyArgs {
  std::vector<std::string> lemmas, fields;
  bool all = false;
  std::string config, variant = "both", format = "text";
  int support = 0, witness_bound = 0, workers = 0, bound_offset = 0;
  std::uint64_t budget = 0;
};

int run_verify(const VerifyArgs& a) {
  verify::Config c = a.config.empty() ? verify::default_config() : verify::parse_config(slurp(a.config));
  if (!a.lemmas.empty()) {
    c.ids.clear();
    for (const auto& id : a.lemmas) c.ids.push_back(verify::lemma(id).id);
  } else if (!a.all && a.config.empty()) {
    throw Error("verify needs --lemma, --all or --config");
  }
  if (!a.fields.empty()) {
    c.fields.clear();
    for (const auto& f : a.fields) c.fields.push_back(parse_field(f));
  }
  if (a.support) c.support = a.support;
  if (a.witness_bound) c.witness_bound = a.witness_bound;
  if (a.workers) c.workers = a.workers;
  if (a.budget) c.budget = a.budget;
  if (a.bound_offset) c.bound_offset = a.bound_offset;
  auto reports = verify::run_all(c);
  if (a.variant != "both") {
    const auto keep = fol::parse_variant(a.variant);
    std::erase_if(reports, [&](const verify::LemmaReport& r) {
      return r.variant != keep && verify::lemma(r.id).has_variants;
    });
  }
  print(verify::to_json(reports), a.format, verify::emit_text(reports));
  return verify::all_corrected_confirmed(reports) ? 0 : 1;
}

struct EvalArgs {
  std::string formula, field, variant = "corrected", format = "text";
  std::vector<std::string> binds;
  int witness_bound = 0, workers = 0;
};

int run_eval(const EvalArgs& a) {
  const std::string source = slurp(a.formula);
  const auto variant = fol::parse_variant(a.variant);
  const auto& macros = fol::MacroRegistry::builtins(variant);
  fol::Bindings bindings;
  std::optional<Field> field;
  if (!a.field.empty()) field = parse_field(a.field);
  for (const auto& b : a.binds) {
    const auto eq = b.find('=');
    if (eq == std::string::npos) throw Error("--bind expects NAME=MATRIX, got '" + b + "'");
    StableMatrix m = parse_matrix(b.substr(eq + 1));
    if (!field) field = m.field();
    bindings.insert_or_assign(b.substr(0, eq), std::move(m));
  }
  if (!field) throw Error("eval needs --field when nothing is bound");
  fol::FormulaPtr f;
  // A file holding "name(P..) := body" is evaluated as its body.
  if (source.find(":=") != std::string::npos) {
    auto def = fol::parse_definition(source, &macros);
    f = def.body;
  } else {
    f = fol::parse(source, &macros);
  }
  fol::EvalOptions o;
  o.variant = variant;
  o.witness_bound = a.witness_bound;
  o.workers = a.workers;
  const auto r = fol::eval(*f, *field, bindings, o);
  Json doc{{"value", r.value},
           {"witness_bound", r.witness_bound},
           {"witnesses", assignment_json(r.witnesses)},
           {"counterexample", assignment_json(r.counterexample)},
           {"bindings_visited", r.stats.bindings_visited},
           {"domains_built", r.stats.domains_built}};
  std::ostringstream text;
  text << (r.value ? "true" : "false") << " (witness bound " << r.witness_bound << ")\n";
  for (const auto& [name, m] : r.witnesses) text << "  " << name << " = " << m.to_string() << "\n";
  for (const auto& [name, m] : r.counterexample) text << "  counterexample " << name << " = " << m.to_string() << "\n";
  print(doc, a.format, text.str());
  return 0;
}

int run_canon(const std::string& path, const std::string& format) {
  const StableMatrix a = parse_matrix(slurp(path));
  Json doc{{"matrix", a.to_string()},
           {"support", a.support()},
           {"minimal_support", minimal_support(a)},
           {"class_key", stable_class_key(a)}};
  const auto ff = frobenius_form(a.embed(std::max(a.support(), 1)));
  Json factors = Json::array();
  for (const auto& p : ff.invariant_factors) factors.push_back(p.to_string());
  doc["invariant_factors"] = factors;
  doc["frobenius_form"] = StableMatrix::from_dense(ff.form).to_string();
  std::ostringstream text;
  text << "support " << a.support() << ", minimal support " << minimal_support(a) << "\n";
  text << "invariant factors:";
  for (const auto& p : ff.invariant_factors) text << " [" << p.to_string() << "]";
  text << "\nfrobenius form " << doc["frobenius_form"].get<std::string>() << "\n";
  if (power(a, 3) == identity(a.field())) {
    const auto c = canonicalize_order3(a);
    doc["signature"] = to_string(c.signature);
    doc["canonical"] = c.certificate.a.to_string();
    doc["certificate"] = {{"u", c.certificate.u.to_string()}, {"a", c.certificate.a.to_string()},
                          {"b", c.certificate.b.to_string()}};
    text << "order-3 signature " << to_string(c.signature) << "\ncanonical " << c.certificate.a.to_string()
         << "\nconjugator " << c.certificate.u.to_string() << "\n";
  }
  print(doc, format, text.str());
  return 0;
}

int run_classcount(const std::string& sig, const std::string& field_text, int bound, bool oracle,
                   const std::string& format) {
  const Field f = parse_field(field_text);
  const auto s = parse_signature(sig);
  const auto r = oracle ? class_count_products_bruteforce(f, s, bound) : class_count_products(f, s, bound);
  Json products = Json::array();
  for (const auto& p : r.products) products.push_back(to_string(p));
  Json witnesses = Json::array();
  for (const auto& [x, y] : r.witnesses) witnesses.push_back({x.to_string(), y.to_string()});
  const Json doc{{"signature", to_string(r.input)}, {"field", f->name()},    {"support", r.support},
                 {"count", r.count},                {"saturated", r.saturated}, {"products", products},
                 {"witnesses", witnesses},          {"method", oracle ? "bruteforce" : "structural"}};
  std::ostringstream text;
  text << to_string(r.input) << " over " << f->name() << " at support " << r.support << ": " << r.count
       << " product classes" << (r.saturated ? "" : " (not saturated)") << "\n";
  for (const auto& p : r.products) text << "  " << to_string(p) << "\n";
  print(doc, format, text.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stablegl: order-3 structure and definability checks in the stable linear group"};
  app.require_subcommand(1);
  const std::vector<std::string> formats{"text", "json"};

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "run lemma checks; exit 0 iff every corrected check confirms");
  verify_cmd->add_option("--lemma", va.lemmas, "lemma id (repeatable)");
  verify_cmd->add_flag("--all", va.all, "every lemma id");
  verify_cmd->add_option("--config", va.config, "key = value config file")->check(CLI::ExistingFile);
  verify_cmd->add_option("--field", va.fields, "field, e.g. gf(4) (repeatable)");
  verify_cmd->add_option("--support", va.support, "support bound");
  verify_cmd->add_option("--witness-bound", va.witness_bound, "quantifier support bound");
  verify_cmd->add_option("--bound-offset", va.bound_offset, "raise every default witness bound");
  verify_cmd->add_option("--budget", va.budget, "enumeration ceiling");
  verify_cmd->add_option("--variant", va.variant, "literal, corrected or both")
      ->check(CLI::IsMember({"literal", "corrected", "both"}));
  verify_cmd->add_option("--format", va.format)->check(CLI::IsMember(formats));
  verify_cmd->add_option("--workers", va.workers, "worker threads (overrides STABLEGL_WORKERS)");

  EvalArgs ea;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a formula file under finite truncation");
  eval_cmd->add_option("--formula", ea.formula)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--bind", ea.binds, "NAME=\"over gf(q); [[...]]\" (repeatable)");
  eval_cmd->add_option("--field", ea.field, "field when nothing is bound");
  eval_cmd->add_option("--witness-bound", ea.witness_bound);
  eval_cmd->add_option("--variant", ea.variant)->check(CLI::IsMember({"literal", "corrected"}));
  eval_cmd->add_option("--format", ea.format)->check(CLI::IsMember(formats));
  eval_cmd->add_option("--workers", ea.workers);

  std::string matrix_file, canon_format = "text";
  auto* canon_cmd = app.add_subcommand("canon", "invariant factors and order-3 canonical form of a matrix");
  canon_cmd->add_option("--matrix", matrix_file)->required()->check(CLI::ExistingFile);
  canon_cmd->add_option("--format", canon_format)->check(CLI::IsMember(formats));

  std::string sig, cc_field = "gf(4)", cc_format = "text";
  int cc_bound = 8;
  bool oracle = false;
  auto* cc_cmd = app.add_subcommand("classcount", "classes of products of commuting conjugates");
  cc_cmd->add_option("--sig", sig, "e.g. \"t[count=1]\" or \"xi[mxi=1,mxi2=0]\"")->required();
  cc_cmd->add_option("--field", cc_field);
  cc_cmd->add_option("--bound", cc_bound, "group support");
  cc_cmd->add_flag("--oracle", oracle, "brute-force enumeration instead of the structural count");
  cc_cmd->add_option("--format", cc_format)->check(CLI::IsMember(formats));

  CLI11_PARSE(app, argc, argv);
  try {
    if (*verify_cmd) return run_verify(va);
    if (*eval_cmd) return run_eval(ea);
    if (*canon_cmd) return run_canon(matrix_file, canon_format);
    if (*cc_cmd) return run_classcount(sig, cc_field, cc_bound, oracle, cc_format);
  } catch (const std::exception& e) {
    std::cerr << "stablegl: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
