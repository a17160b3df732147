#include "stablegl/folang/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <optional>
#include <set>
#include <unordered_map>

#include <omp.h>

#include "stablegl/error.hpp"
#include "stablegl/folang/domains.hpp"
#include "stablegl/folang/parser.hpp"

namespace stablegl::fol {

void EvalStats::merge(const EvalStats& o) {
  domains_built += o.domains_built;
  domain_elements += o.domain_elements;
  largest_domain = std::max(largest_domain, o.largest_domain);
  bindings_visited += o.bindings_visited;
  macro_calls += o.macro_calls;
  macro_memo_hits += o.macro_memo_hits;
  equations_solved += o.equations_solved;
  guards_hoisted += o.guards_hoisted;
}

int default_witness_bound(const Bindings& bindings) {
  int s = 0;
  for (const auto& [name, m] : bindings) s = std::max(s, m.support());
  return 2 * s + 4;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("STABLEGL_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return std::max(1, omp_get_max_threads());
}

namespace {

void flatten_and(const FormulaPtr& f, std::vector<const Formula*>& out) {
  if (f->kind == FormulaKind::And) {
    flatten_and(f->a, out);
    flatten_and(f->b, out);
  } else {
    out.push_back(f.get());
  }
}

void flatten_product(const TermPtr& t, std::vector<TermPtr>& out) {
  if (t->kind == TermKind::Product) {
    flatten_product(t->left, out);
    flatten_product(t->right, out);
  } else {
    out.push_back(t);
  }
}

int occurrences(const Term& t, const std::string& v) {
  int n = (t.kind == TermKind::Var && t.name == v) ? 1 : 0;
  if (t.left) n += occurrences(*t.left, v);
  if (t.right) n += occurrences(*t.right, v);
  return n;
}

// u x w = v, or its mirror, with x occurring once as a factor (possibly
// inverted) of one side.
struct SolvePlan {
  bool valid = false;
  std::vector<TermPtr> before, after;
  TermPtr other;
  bool inverted = false;
};

std::optional<SolvePlan> plan_for(const Formula& c, const std::string& v) {
  if (c.kind != FormulaKind::Equal) return std::nullopt;
  if (occurrences(*c.lhs, v) + occurrences(*c.rhs, v) != 1) return std::nullopt;
  const bool in_lhs = occurrences(*c.lhs, v) == 1;
  std::vector<TermPtr> factors;
  flatten_product(in_lhs ? c.lhs : c.rhs, factors);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const Term& t = *factors[i];
    const bool plain = t.kind == TermKind::Var && t.name == v;
    const bool inv = t.kind == TermKind::Inverse && t.left->kind == TermKind::Var && t.left->name == v;
    if (!plain && !inv) continue;
    SolvePlan p;
    p.valid = true;
    p.before.assign(factors.begin(), factors.begin() + static_cast<long>(i));
    p.after.assign(factors.begin() + static_cast<long>(i) + 1, factors.end());
    p.other = in_lhs ? c.rhs : c.lhs;
    p.inverted = inv;
    return p;
  }
  return std::nullopt;
}

struct ChainInfo {
  std::vector<const Formula*> nodes;
  std::vector<const Formula*> conjuncts;
  std::vector<bool> hoisted;
  bool any_hoisted = false;
  std::vector<SolvePlan> solve;
  std::size_t leading = 0;  // nodes of the same kind as nodes[0]
};

ChainInfo build_chain(const Formula* head) {
  ChainInfo ci;
  const Formula* f = head;
  FormulaPtr body;
  while (f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall) {
    ci.nodes.push_back(f);
    body = f->a;
    f = f->a.get();
  }
  flatten_and(body, ci.conjuncts);
  std::vector<std::string> vars;
  for (const auto* n : ci.nodes) vars.push_back(n->name);
  auto uses = [](const Formula& c, const std::vector<std::string>& names, std::size_t from) {
    const auto fn = free_names(c);
    for (std::size_t i = from; i < names.size(); ++i)
      if (fn.count(names[i])) return true;
    return false;
  };
  for (const auto* c : ci.conjuncts) {
    const bool h = !uses(*c, vars, 0);
    ci.hoisted.push_back(h);
    ci.any_hoisted = ci.any_hoisted || h;
  }
  ci.solve.resize(ci.nodes.size());
  for (std::size_t i = 0; i < ci.nodes.size(); ++i) {
    bool tail_exists = true;
    for (std::size_t j = i; j < ci.nodes.size(); ++j)
      tail_exists = tail_exists && ci.nodes[j]->kind == FormulaKind::Exists;
    if (!tail_exists) continue;
    for (std::size_t k = 0; k < ci.conjuncts.size(); ++k) {
      if (ci.hoisted[k] || uses(*ci.conjuncts[k], vars, i + 1)) continue;
      if (auto p = plan_for(*ci.conjuncts[k], vars[i])) {
        ci.solve[i] = *p;
        break;
      }
    }
  }
  while (ci.leading < ci.nodes.size() && ci.nodes[ci.leading]->kind == ci.nodes[0]->kind) ++ci.leading;
  return ci;
}

struct DomainKey {
  int kind;
  bool uptoconj;
  int bound;
  std::optional<StableMatrix> of, with;

  bool operator<(const DomainKey& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (uptoconj != o.uptoconj) return uptoconj < o.uptoconj;
    if (bound != o.bound) return bound < o.bound;
    if (of != o.of) return of < o.of;
    return with < o.with;
  }
};

using Elements = std::shared_ptr<const std::vector<StableMatrix>>;
using Mask = std::vector<bool>;

class Evaluator {
 public:
  Evaluator(Field f, const MacroRegistry& reg, const EvalOptions& opt, int n, const Bindings& globals)
      : f_(std::move(f)), reg_(reg), opt_(opt), n_(n), globals_(globals), e_(identity(f_)) {}

  Evaluator fork() const {
    Evaluator e(f_, reg_, opt_, n_, globals_);
    e.env_ = env_;
    return e;
  }

  EvalStats stats;
  bool recording = false;
  bool partition = false;
  std::vector<std::optional<StableMatrix>> slots;

  bool formula(const Formula& f) {
    switch (f.kind) {
      case FormulaKind::Equal:
        return term(*f.lhs) == term(*f.rhs);
      case FormulaKind::Conj:
        return conjugate_atom(term(*f.lhs), term(*f.rhs));
      case FormulaKind::Not:
        return !formula(*f.a);
      case FormulaKind::And:
        return formula(*f.a) && formula(*f.b);
      case FormulaKind::Or:
        return formula(*f.a) || formula(*f.b);
      case FormulaKind::Implies:
        return !formula(*f.a) || formula(*f.b);
      case FormulaKind::Exists:
      case FormulaKind::Forall:
        return quantified(f);
      case FormulaKind::Macro:
        return macro(f);
    }
    return false;
  }

  StableMatrix term(const Term& t) {
    switch (t.kind) {
      case TermKind::Var:
      case TermKind::Param:
        return lookup(t.name);
      case TermKind::Identity:
        return e_;
      case TermKind::Product:
        return term(*t.left) * term(*t.right);
      case TermKind::Inverse:
        return inverse(term(*t.left));
      case TermKind::Power:
        return power(term(*t.left), t.exponent);
    }
    return e_;
  }

  // Checks a recorded assignment of the leading quantifiers and evaluates the
  // residue under it.
  std::optional<bool> residue(const Formula& root, const Assignment& a) {
    const Formula* f = &root;
    for (const auto& [name, value] : a) {
      if ((f->kind != FormulaKind::Exists && f->kind != FormulaKind::Forall) || f->name != name)
        return std::nullopt;
      if (!contains(f->domain, value)) return std::nullopt;
      env_.emplace_back(name, value);
      f = f->a.get();
    }
    const bool v = formula(*f);
    env_.erase(env_.end() - static_cast<long>(a.size()), env_.end());
    return v;
  }

 private:
  const StableMatrix& lookup(const std::string& name) const {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it)
      if (it->first == name) return it->second;
    auto g = globals_.find(name);
    if (g == globals_.end()) throw UnboundParameter("unbound parameter '" + name + "'");
    return g->second;
  }

  const std::string& key(const StableMatrix& m) {
    auto it = keys_.find(m);
    if (it != keys_.end()) return it->second;
    return keys_.emplace(m, fast_class_key(m)).first->second;
  }

  bool conjugate_atom(const StableMatrix& a, const StableMatrix& b) {
    if (!opt_.quantified_conj) return key(a) == key(b);
    if (!group_) {
      const int m = std::max({n_, a.support(), b.support()});
      group_ = std::make_shared<const std::vector<StableMatrix>>(general_linear_group(f_, m, opt_.budget));
    }
    for (const auto& u : *group_)
      if (u * b == a * u) return true;
    return false;
  }

  bool macro(const Formula& f) {
    const Macro& m = reg_.get(f.name);
    std::vector<StableMatrix> args;
    for (const auto& t : f.args) args.push_back(term(*t));
    ++stats.macro_calls;
    auto memo_key = std::make_pair(f.name, args);
    if (auto it = memo_.find(memo_key); it != memo_.end()) {
      ++stats.macro_memo_hits;
      return it->second;
    }
    std::vector<std::pair<std::string, StableMatrix>> saved = std::move(env_);
    env_.clear();
    for (std::size_t i = 0; i < args.size(); ++i) env_.emplace_back(m.params[i], args[i]);
    bool v;
    try {
      v = formula(*m.body);
    } catch (...) {
      env_ = std::move(saved);
      throw;
    }
    env_ = std::move(saved);
    memo_.emplace(std::move(memo_key), v);
    return v;
  }

  bool upto(const Domain& d) const { return d.uptoconj && !opt_.force_full; }
  int bound_of(const Domain& d) const { return d.bound.value_or(n_); }
  bool is_order3(const StableMatrix& m) const { return power(m, 3) == e_; }

  bool contains(const Domain& d, const StableMatrix& x) {
    if (x.support() > bound_of(d) || !is_invertible(x)) return false;
    switch (d.kind) {
      case Domain::Kind::Group:
        return true;
      case Domain::Kind::Order3:
        return is_order3(x);
      case Domain::Kind::Conj:
        return key(x) == key(term(*d.of));
      case Domain::Kind::CommConj:
        return key(x) == key(term(*d.of)) && commute(x, term(*d.with));
    }
    return false;
  }

  Elements domain(const Domain& d) {
    DomainKey k{static_cast<int>(d.kind), upto(d), bound_of(d), std::nullopt, std::nullopt};
    if (d.of) k.of = term(*d.of);
    if (d.with) k.with = term(*d.with);
    if (auto it = domains_.find(k); it != domains_.end()) return it->second;
    auto elems = std::make_shared<std::vector<StableMatrix>>(build_domain(d.kind, k));
    std::sort(elems->begin(), elems->end());
    ++stats.domains_built;
    stats.domain_elements += elems->size();
    stats.largest_domain = std::max<std::uint64_t>(stats.largest_domain, elems->size());
    Elements out = elems;
    domains_.emplace(std::move(k), out);
    return out;
  }

  std::vector<StableMatrix> build_domain(Domain::Kind kind, const DomainKey& k) {
    const int b = k.bound;
    if (k.uptoconj) {
      switch (kind) {
        case Domain::Kind::Group:
          return class_representatives(f_, b);
        case Domain::Kind::Order3: {
          std::vector<StableMatrix> out;
          for (const auto& s : signatures_up_to(f_, b)) out.push_back(canonical_matrix(f_, s));
          return out;
        }
        case Domain::Kind::Conj:
          if (minimal_support(*k.of) > b) return {};
          return {minimal_representative(*k.of)};
        case Domain::Kind::CommConj:
          if (is_order3(*k.of) && is_order3(*k.with) && k.with->support() <= b) return joint_reps(*k.of, *k.with, b);
          break;
      }
    }
    switch (kind) {
      case Domain::Kind::Group:
        return general_linear_group(f_, b, opt_.budget);
      case Domain::Kind::Order3: {
        if (span_size(*f_, static_cast<std::size_t>(b * b), opt_.budget)) {
          std::vector<StableMatrix> out;
          for (auto& g : general_linear_group(f_, b, opt_.budget))
            if (is_order3(g)) out.push_back(std::move(g));
          return out;
        }
        std::vector<StableMatrix> out;
        for (const auto& s : signatures_up_to(f_, b)) {
          auto orbit = conjugacy_orbit(canonical_matrix(f_, s), b, opt_.budget);
          out.insert(out.end(), orbit.begin(), orbit.end());
          if (out.size() > opt_.budget) throw BudgetExceeded("order3 domain exceeds budget");
        }
        return out;
      }
      case Domain::Kind::Conj:
        return conjugacy_orbit(*k.of, b, opt_.budget);
      case Domain::Kind::CommConj:
        return commuting_conjugates(*k.of, *k.with, b, opt_.budget);
    }
    return {};
  }

  // One x per class of pairs (with, x) under the centralizer of `with`.
  std::vector<StableMatrix> joint_reps(const StableMatrix& of, const StableMatrix& with, int b) {
    const auto ct = canonicalize_order3(with);
    const auto so = canonicalize_order3(of).signature;
    if (so.dimension() > b || ct.signature.dimension() > b) return {};
    const StableMatrix& u = ct.certificate.u;
    const StableMatrix ui = inverse(u);
    std::vector<StableMatrix> out;
    for (const auto& j : enumerate_commuting_pair_signatures(ct.signature, so, b)) {
      const auto pq = canonical_pair(f_, j);
      out.push_back(ui * pq.second * u);
    }
    return out;
  }

  const ChainInfo& chain(const Formula* head) {
    auto it = chains_.find(head);
    if (it != chains_.end()) return it->second;
    return chains_.emplace(head, build_chain(head)).first->second;
  }

  // Every universal of the chain has a nonempty domain whatever the values
  // of the chain variables before it.
  bool universals_nonempty(const ChainInfo& ci) {
    std::set<std::string> chain_vars;
    for (const auto* n : ci.nodes) chain_vars.insert(n->name);
    auto closed = [&](const TermPtr& t) {
      for (const auto& name : free_names(*t))
        if (chain_vars.count(name)) return false;
      return true;
    };
    auto node_of = [&](const TermPtr& t, std::size_t before) -> const Formula* {
      if (t->kind != TermKind::Var) return nullptr;
      for (std::size_t k = before; k-- > 0;)
        if (ci.nodes[k]->name == t->name) return ci.nodes[k];
      return nullptr;
    };
    for (std::size_t j = 0; j < ci.nodes.size(); ++j) {
      const Formula& q = *ci.nodes[j];
      if (q.kind != FormulaKind::Forall) continue;
      const Domain& d = q.domain;
      const int b = bound_of(d);
      if (d.kind == Domain::Kind::Group || d.kind == Domain::Kind::Order3) continue;
      if (d.kind == Domain::Kind::Conj) {
        if (const Formula* k = node_of(d.of, j); k && bound_of(k->domain) <= b) continue;
        if (closed(d.of) && minimal_support(term(*d.of)) <= b) continue;
        return false;
      }
      if (const Formula* k = node_of(d.with, j)) {
        const Domain& kd = k->domain;
        if ((kd.kind == Domain::Kind::Conj || kd.kind == Domain::Kind::CommConj) && closed(d.of) &&
            equal(*kd.of, *d.of) && bound_of(kd) <= b)
          continue;
        return false;
      }
      if (closed(d.of) && closed(d.with)) {
        const StableMatrix s = term(*d.of), t = term(*d.with);
        if (s.is_identity() || (key(s) == key(t) && t.support() <= b)) continue;
      }
      return false;
    }
    return true;
  }

  bool quantified(const Formula& head) {
    const ChainInfo& ci = chain(&head);
    const bool record = recording;
    const bool part = partition;
    recording = partition = false;
    if (record) slots.assign(ci.leading, std::nullopt);
    Mask skip(ci.conjuncts.size(), false);
    if (opt_.hoist_guards && ci.any_hoisted) {
      bool all_true = true;
      for (std::size_t k = 0; k < ci.conjuncts.size() && all_true; ++k)
        if (ci.hoisted[k]) {
          ++stats.guards_hoisted;
          all_true = formula(*ci.conjuncts[k]);
        }
      if (all_true)
        skip = ci.hoisted;
      else if (universals_nonempty(ci))
        return false;
    }
    return run_chain(ci, skip, 0, record, part);
  }

  bool matrix(const ChainInfo& ci, const Mask& skip) {
    for (std::size_t k = 0; k < ci.conjuncts.size(); ++k)
      if (!skip[k] && !formula(*ci.conjuncts[k])) return false;
    return true;
  }

  StableMatrix product_of(const std::vector<TermPtr>& ts) {
    StableMatrix r = e_;
    for (const auto& t : ts) r = r * term(*t);
    return r;
  }

 public:
  bool run_chain(const ChainInfo& ci, const Mask& skip, std::size_t i, bool record, bool part) {
    if (i == ci.nodes.size()) return matrix(ci, skip);
    const Formula& q = *ci.nodes[i];
    const bool is_exists = q.kind == FormulaKind::Exists;
    Elements elems;
    if (opt_.solve_equations && ci.solve[i].valid && !upto(q.domain)) {
      const SolvePlan& p = ci.solve[i];
      StableMatrix x = inverse(product_of(p.before)) * term(*p.other) * inverse(product_of(p.after));
      if (p.inverted) x = inverse(x);
      ++stats.equations_solved;
      auto single = std::make_shared<std::vector<StableMatrix>>();
      if (contains(q.domain, x)) single->push_back(std::move(x));
      elems = single;
    } else {
      elems = domain(q.domain);
    }
    if (part && elems->size() > 1 && resolve_workers(opt_.workers) > 1)
      return run_partitioned(ci, skip, *elems, record);
    for (const auto& x : *elems) {
      ++stats.bindings_visited;
      env_.emplace_back(q.name, x);
      bool r;
      try {
        r = run_chain(ci, skip, i + 1, record && i + 1 < ci.leading, false);
      } catch (...) {
        env_.pop_back();
        throw;
      }
      env_.pop_back();
      if (r == is_exists) {
        if (record) slots[i] = x;
        return is_exists;
      }
    }
    return !is_exists;
  }

 private:
  // Outermost quantifier split across workers; the least decisive index wins,
  // so the outcome matches the serial scan.
  bool run_partitioned(const ChainInfo& ci, const Mask& skip, const std::vector<StableMatrix>& elems,
                       bool record) {
    const Formula& q = *ci.nodes[0];
    const bool is_exists = q.kind == FormulaKind::Exists;
    const int workers = std::min<int>(resolve_workers(opt_.workers), static_cast<int>(elems.size()));
    std::vector<Evaluator> locals;
    for (int w = 0; w < workers; ++w) locals.push_back(fork());
    const std::size_t none = elems.size();
    std::atomic<std::size_t> best{none};
    std::vector<std::vector<std::optional<StableMatrix>>> found(elems.size());
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (std::size_t idx = 0; idx < elems.size(); ++idx) {
      if (idx > best.load() || error) continue;
      Evaluator& ev = locals[static_cast<std::size_t>(omp_get_thread_num())];
      try {
        ++ev.stats.bindings_visited;
        const bool inner_record = record && ci.leading > 1;
        if (inner_record) ev.slots.assign(ci.leading, std::nullopt);
        ev.env_.emplace_back(q.name, elems[idx]);
        const bool r = ev.run_chain(ci, skip, 1, inner_record, false);
        ev.env_.pop_back();
        if (r == is_exists) {
          found[idx] = ev.slots;
          std::size_t cur = best.load();
          while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
          }
        }
      } catch (...) {
#pragma omp critical(stablegl_eval_error)
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
    for (const auto& ev : locals) stats.merge(ev.stats);
    const std::size_t b = best.load();
    if (b == none) return !is_exists;
    if (record) {
      slots = found[b];
      slots.resize(ci.leading);
      slots[0] = elems[b];
    }
    return is_exists;
  }

  Field f_;
  const MacroRegistry& reg_;
  EvalOptions opt_;
  int n_;
  const Bindings& globals_;
  StableMatrix e_;
  std::vector<std::pair<std::string, StableMatrix>> env_;
  std::unordered_map<StableMatrix, std::string, StableMatrixHash> keys_;
  std::map<DomainKey, Elements> domains_;
  std::map<std::pair<std::string, std::vector<StableMatrix>>, bool> memo_;
  std::map<const Formula*, ChainInfo> chains_;
  std::shared_ptr<const std::vector<StableMatrix>> group_;
};

int resolve_bound(const Bindings& bindings, const EvalOptions& options) {
  const int n = options.witness_bound > 0 ? options.witness_bound : default_witness_bound(bindings);
  for (const auto& [name, m] : bindings)
    if (m.support() > n)
      throw SupportTooSmall("parameter " + name + " has support " + std::to_string(m.support()) +
                            " above the witness bound " + std::to_string(n));
  return n;
}

const MacroRegistry& registry(const EvalOptions& o) {
  return o.macros ? *o.macros : MacroRegistry::builtins(o.variant);
}

Assignment leading_assignment(const Formula& f, const std::vector<std::optional<StableMatrix>>& slots) {
  Assignment out;
  const Formula* q = &f;
  for (const auto& s : slots) {
    if (!s) break;
    out.emplace_back(q->name, *s);
    q = q->a.get();
  }
  return out;
}

}  // namespace

EvalResult eval(const Formula& f, const Field& field, const Bindings& bindings, const EvalOptions& options) {
  for (const auto& [name, m] : bindings) require_same_field(field, m.field());
  const int n = resolve_bound(bindings, options);
  Evaluator ev(field, registry(options), options, n, bindings);
  const bool quantified = f.kind == FormulaKind::Exists || f.kind == FormulaKind::Forall;
  ev.recording = ev.partition = quantified;
  EvalResult r;
  r.witness_bound = n;
  r.value = ev.formula(f);
  r.stats = ev.stats;
  if (quantified) {
    if (f.kind == FormulaKind::Exists && r.value) r.witnesses = leading_assignment(f, ev.slots);
    if (f.kind == FormulaKind::Forall && !r.value) r.counterexample = leading_assignment(f, ev.slots);
  }
  return r;
}

EvalResult eval(std::string_view source, const Field& field, const Bindings& bindings,
                const EvalOptions& options) {
  return eval(*parse(source, &registry(options)), field, bindings, options);
}

bool verify_assignment(const Formula& f, const Field& field, const Bindings& bindings,
                       const EvalResult& result, const EvalOptions& options) {
  const int n = resolve_bound(bindings, options);
  Evaluator ev(field, registry(options), options, n, bindings);
  const Assignment& a = result.value ? result.witnesses : result.counterexample;
  const auto v = ev.residue(f, a);
  return v && *v == result.value;
}

std::map<Order3Signature, bool> characterize(const Formula& f, const Field& field, int witness_bound,
                                             const std::vector<Order3Signature>& candidates,
                                             const std::string& param, const Bindings& others,
                                             const EvalOptions& options) {
  std::map<Order3Signature, bool> out;
  EvalOptions o = options;
  o.witness_bound = witness_bound;
  for (const auto& s : candidates) {
    Bindings b = others;
    b.insert_or_assign(param, canonical_matrix(field, s));
    out[s] = eval(f, field, b, o).value;
  }
  return out;
}

}  // namespace stablegl::fol
