#include "nadd/sequence.hpp"

#include <algorithm>

namespace nadd {

std::string to_string(SequenceKind k) {
  switch (k) {
    case SequenceKind::additive: return "additive";
    case SequenceKind::cocycle: return "cocycle";
    case SequenceKind::measure_log: return "measure_log";
    case SequenceKind::custom: return "custom";
  }
  return "?";
}

std::string to_string(CocycleNorm k) {
  return k == CocycleNorm::entry_sum ? "entry_sum" : "operator_two";
}

std::string to_string(AdditivityClass c) {
  switch (c) {
    case AdditivityClass::additive: return "additive";
    case AdditivityClass::almost_additive_evidence: return "almost_additive_evidence";
    case AdditivityClass::inconclusive: return "inconclusive";
  }
  return "?";
}

MatrixCocycle::MatrixCocycle(std::vector<Matrix> per_symbol, CocycleNorm norm)
    : per_symbol_(std::move(per_symbol)), norm_(norm) {
  if (per_symbol_.empty()) throw ConfigError("cocycle needs one matrix per symbol");
  const int d = per_symbol_[0].rows;
  if (d < 1) throw ConfigError("cocycle dimension must be >= 1");
  for (const Matrix& m : per_symbol_) {
    if (m.rows != d || m.cols != d) throw ConfigError("cocycle matrices must all be square, one size");
    for (double v : m.a) {
      if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError("cocycle matrices must have strictly positive entries");
    }
  }
}

double MatrixCocycle::log_norm(const Matrix& product) const {
  return std::log(norm_ == CocycleNorm::entry_sum ? product.entry_sum() : product.two_norm());
}

CylinderMeasure::CylinderMeasure(std::vector<Matrix> emissions, std::vector<double> stationary)
    : emissions_(std::move(emissions)), p_(std::move(stationary)) {
  if (emissions_.empty()) throw ConfigError("cylinder measure needs one matrix per symbol");
  const int s = emissions_[0].rows;
  if (s < 1) throw ConfigError("cylinder measure state dimension must be >= 1");
  Matrix q(s, s);
  for (const Matrix& m : emissions_) {
    if (m.rows != s || m.cols != s)
      throw ConfigError("cylinder measure matrices must all be square, one size");
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) {
        if (m.at(i, j) < 0.0 || !std::isfinite(m.at(i, j)))
          throw ConfigError("cylinder measure matrices must be nonnegative");
        q.at(i, j) += m.at(i, j);
      }
  }
  for (int i = 0; i < s; ++i) {
    double row = 0.0;
    for (int j = 0; j < s; ++j) row += q.at(i, j);
    if (std::abs(row - 1.0) > 1e-12)
      throw ConfigError("sum of emission matrices must be row stochastic (row " +
                        std::to_string(i) + " sums to " + std::to_string(row) + ")");
  }
  if (p_.empty()) {
    // Stationary vector of Q by power iteration.
    p_.assign(static_cast<std::size_t>(s), 1.0 / s);
    for (int iter = 0; iter < 100000; ++iter) {
      std::vector<double> next = vec_mat(p_, q);
      double norm = 0.0, diff = 0.0;
      for (int i = 0; i < s; ++i) {
        norm += next[i];
        diff = std::max(diff, std::abs(next[i] - p_[i]));
      }
      for (double& x : next) x /= norm;
      p_ = std::move(next);
      if (diff < 1e-15) break;
    }
  }
  if (static_cast<int>(p_.size()) != s)
    throw ConfigError("stationary vector length must match the state dimension");
  double total = 0.0;
  for (double x : p_) {
    if (x < 0.0) throw ConfigError("stationary vector must be nonnegative");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-10) throw ConfigError("stationary vector must sum to 1");
  std::vector<double> pq = vec_mat(p_, q);
  for (int i = 0; i < s; ++i)
    if (std::abs(pq[i] - p_[i]) > 1e-10)
      throw ConfigError("stationary vector is not invariant under Q");
}

CylinderMeasure CylinderMeasure::bernoulli(std::vector<double> probabilities) {
  std::vector<Matrix> em;
  for (double p : probabilities) {
    Matrix m(1, 1);
    m.at(0, 0) = p;
    em.push_back(m);
  }
  return CylinderMeasure(std::move(em), {1.0});
}

bool CylinderMeasure::strictly_positive() const {
  for (const Matrix& m : emissions_)
    if (!(m.min_entry() > 0.0)) return false;
  return true;
}

double CylinderMeasure::measure(WordView w) const {
  std::vector<double> row = p_;
  for (Symbol a : w) {
    if (a >= emissions_.size()) throw DomainError("cylinder measure: symbol out of range");
    row = vec_mat(row, emissions_[a]);
  }
  double s = 0.0;
  for (double x : row) s += x;
  return s;
}

namespace {

class AdditiveCursor final : public SequenceCursor {
 public:
  explicit AdditiveCursor(std::shared_ptr<const LocallyConstantPotential> f)
      : f_(std::move(f)), k_(f_->depth()) {
    cum_.push_back(0.0);
    // Boundary tables: extremal trailing contribution of the k-1 terms that
    // straddle a cylinder boundary, per (k-1)-suffix.
    if (k_ > 1) {
      suffix_index_ = WordIndex(f_->sft(), k_ - 1);
      bmax_.assign(suffix_index_.size(), -std::numeric_limits<double>::infinity());
      bmin_.assign(suffix_index_.size(), std::numeric_limits<double>::infinity());
      const WordIndex tail(f_->sft(), 2 * k_ - 2);
      for (std::size_t r = 0; r < tail.size(); ++r) {
        WordView w = tail.word(r);
        double s = 0.0;
        for (int i = 0; i < k_ - 1; ++i)
          s += f_->value(w.subspan(static_cast<std::size_t>(i)));
        const std::size_t u = suffix_index_.rank(w.subspan(0, static_cast<std::size_t>(k_ - 1)));
        bmax_[u] = std::max(bmax_[u], s);
        bmin_[u] = std::min(bmin_[u], s);
      }
    }
  }

  void push(Symbol a) override {
    word_.push_back(a);
    const int d = static_cast<int>(word_.size());
    if (d >= k_) {
      const double term = f_->value(WordView(word_).subspan(static_cast<std::size_t>(d - k_)));
      cum_.push_back(cum_.back() + term);
    }
  }
  void pop() override {
    if (static_cast<int>(word_.size()) >= k_) cum_.pop_back();
    word_.pop_back();
  }
  int depth() const override { return static_cast<int>(word_.size()); }

  Interval bounds(int n) const override {
    const int d = depth();
    if (d >= n + k_ - 1) return Interval::point(cum_[static_cast<std::size_t>(n)]);
    if (d >= n && n >= k_ - 1) {
      // First n-k+1 terms are pinned; the k-1 trailing terms range over the
      // continuations summarized by the boundary tables.
      const double head = cum_[static_cast<std::size_t>(n - k_ + 1)];
      const std::size_t u =
          suffix_index_.rank(WordView(word_).subspan(static_cast<std::size_t>(n - k_ + 1),
                                                     static_cast<std::size_t>(k_ - 1)));
      return {head + bmin_[u], head + bmax_[u]};
    }
    if (d >= n) return brute_bounds(n);
    throw DomainError("additive cursor: bounds need a prefix of at least n symbols");
  }

 private:
  // S_n f extrema over the cylinder of the first n symbols when every term
  // straddles the boundary (n < k-1): enumerate the k-1 continuations.
  Interval brute_bounds(int n) const {
    const Sft& sft = f_->sft();
    Word ext(word_.begin(), word_.begin() + n);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    std::function<void()> rec = [&] {
      if (static_cast<int>(ext.size()) == n + k_ - 1) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += f_->value(WordView(ext).subspan(static_cast<std::size_t>(i)));
        lo = std::min(lo, s);
        hi = std::max(hi, s);
        return;
      }
      for (int a = 0; a < sft.alphabet_size(); ++a) {
        if (!sft.admissible(ext.back(), static_cast<Symbol>(a))) continue;
        ext.push_back(static_cast<Symbol>(a));
        rec();
        ext.pop_back();
      }
    };
    rec();
    return {lo, hi};
  }

  std::shared_ptr<const LocallyConstantPotential> f_;
  int k_;
  Word word_;
  std::vector<double> cum_;
  WordIndex suffix_index_;
  std::vector<double> bmax_, bmin_;
};

class CocycleCursor final : public SequenceCursor {
 public:
  explicit CocycleCursor(std::shared_ptr<const MatrixCocycle> c) : c_(std::move(c)) {
    products_.push_back(Matrix::identity(c_->dimension()));
  }
  void push(Symbol a) override { products_.push_back(products_.back() * c_->matrix(a)); }
  void pop() override { products_.pop_back(); }
  int depth() const override { return static_cast<int>(products_.size()) - 1; }
  Interval bounds(int n) const override {
    if (depth() < n) throw DomainError("cocycle cursor: prefix shorter than n");
    return Interval::point(c_->log_norm(products_[static_cast<std::size_t>(n)]));
  }

 private:
  std::shared_ptr<const MatrixCocycle> c_;
  std::vector<Matrix> products_;
};

class MeasureLogCursor final : public SequenceCursor {
 public:
  explicit MeasureLogCursor(std::shared_ptr<const CylinderMeasure> m) : m_(std::move(m)) {
    rows_.push_back(m_->stationary());
  }
  void push(Symbol a) override { rows_.push_back(vec_mat(rows_.back(), m_->emission(a))); }
  void pop() override { rows_.pop_back(); }
  int depth() const override { return static_cast<int>(rows_.size()) - 1; }
  Interval bounds(int n) const override {
    if (depth() < n) throw DomainError("measure-log cursor: prefix shorter than n");
    double mu = 0.0;
    for (double x : rows_[static_cast<std::size_t>(n)]) mu += x;
    if (!(mu > 0.0))
      throw DomainError("measure-log sequence hit a zero-probability cylinder");
    return Interval::point(std::log(mu));
  }

 private:
  std::shared_ptr<const CylinderMeasure> m_;
  std::vector<std::vector<double>> rows_;
};

class CustomCursor final : public SequenceCursor {
 public:
  explicit CustomCursor(PotentialSequence::CustomFn fn) : fn_(std::move(fn)) {}
  void push(Symbol a) override { word_.push_back(a); }
  void pop() override { word_.pop_back(); }
  int depth() const override { return static_cast<int>(word_.size()); }
  Interval bounds(int n) const override {
    if (depth() < n) throw DomainError("custom cursor: prefix shorter than n");
    return fn_(n, WordView(word_).subspan(0, static_cast<std::size_t>(n)));
  }

 private:
  PotentialSequence::CustomFn fn_;
  Word word_;
};

class ComboCursor final : public SequenceCursor {
 public:
  explicit ComboCursor(std::vector<std::pair<double, std::unique_ptr<SequenceCursor>>> parts)
      : parts_(std::move(parts)) {}
  void push(Symbol a) override {
    for (auto& [c, cur] : parts_) cur->push(a);
  }
  void pop() override {
    for (auto& [c, cur] : parts_) cur->pop();
  }
  int depth() const override { return parts_.empty() ? 0 : parts_[0].second->depth(); }
  Interval bounds(int n) const override {
    Interval acc = Interval::point(0.0);
    for (const auto& [c, cur] : parts_) acc = acc + scale(c, cur->bounds(n));
    return acc;
  }

 private:
  std::vector<std::pair<double, std::unique_ptr<SequenceCursor>>> parts_;
};

}  // namespace

PotentialSequence PotentialSequence::additive(LocallyConstantPotential generator) {
  PotentialSequence s;
  s.kind_ = SequenceKind::additive;
  s.sft_ = generator.sft();
  s.cylinder_constant_ = generator.depth() == 1;
  s.slack_ = generator.depth() - 1;
  s.generator_ = std::make_shared<LocallyConstantPotential>(std::move(generator));
  return s;
}

PotentialSequence PotentialSequence::cocycle(Sft sft, MatrixCocycle cocycle) {
  if (cocycle.symbol_count() != sft.alphabet_size())
    throw ConfigError("cocycle needs exactly one matrix per alphabet symbol");
  PotentialSequence s;
  s.kind_ = SequenceKind::cocycle;
  s.sft_ = std::move(sft);
  s.cylinder_constant_ = true;
  s.slack_ = 0;
  s.cocycle_ = std::make_shared<MatrixCocycle>(std::move(cocycle));
  return s;
}

PotentialSequence PotentialSequence::measure_log(Sft sft, CylinderMeasure measure) {
  if (measure.symbol_count() != sft.alphabet_size())
    throw ConfigError("measure-log sequence needs one emission matrix per alphabet symbol");
  PotentialSequence s;
  s.kind_ = SequenceKind::measure_log;
  s.sft_ = std::move(sft);
  s.cylinder_constant_ = true;
  s.slack_ = 0;
  s.measure_ = std::make_shared<CylinderMeasure>(std::move(measure));
  return s;
}

PotentialSequence PotentialSequence::custom(Sft sft, CustomFn fn, bool cylinder_constant) {
  PotentialSequence s;
  s.kind_ = SequenceKind::custom;
  s.sft_ = std::move(sft);
  s.cylinder_constant_ = cylinder_constant;
  s.slack_ = 0;
  s.custom_ = std::move(fn);
  return s;
}

Interval PotentialSequence::bounds(int n, WordView w) const {
  if (n < 1) throw DomainError("sequence bounds: n must be >= 1");
  if (static_cast<int>(w.size()) < n) throw DomainError("sequence bounds: word shorter than n");
  auto cur = cursor();
  const int need = std::min<int>(static_cast<int>(w.size()), window(n));
  for (int i = 0; i < need; ++i) cur->push(w[static_cast<std::size_t>(i)]);
  return cur->bounds(n);
}

double PotentialSequence::value(int n, WordView w) const {
  if (static_cast<int>(w.size()) < window(n))
    throw DomainError("sequence value: need " + std::to_string(window(n)) + " symbols for f_" +
                      std::to_string(n));
  Interval b = bounds(n, w);
  if (!b.is_point())
    throw DomainError("sequence value: f_" + std::to_string(n) +
                      " is not constant on this cylinder; use bounds()");
  return b.lo;
}

double PotentialSequence::evaluate(WordView w) const {
  const int n = static_cast<int>(w.size()) - slack_;
  if (n < 1) throw DomainError("evaluate: word shorter than the sequence window");
  return value(n, w);
}

std::unique_ptr<SequenceCursor> PotentialSequence::cursor() const {
  switch (kind_) {
    case SequenceKind::additive:
      return std::make_unique<AdditiveCursor>(generator_);
    case SequenceKind::cocycle:
      return std::make_unique<CocycleCursor>(cocycle_);
    case SequenceKind::measure_log:
      return std::make_unique<MeasureLogCursor>(measure_);
    case SequenceKind::custom:
      if (!combo_.empty()) {
        std::vector<std::pair<double, std::unique_ptr<SequenceCursor>>> parts;
        parts.reserve(combo_.size());
        for (const auto& [c, seq] : combo_) parts.emplace_back(c, seq->cursor());
        return std::make_unique<ComboCursor>(std::move(parts));
      }
      return std::make_unique<CustomCursor>(custom_);
  }
  throw Error("unreachable sequence kind");
}

PotentialSequence scale_and_add(const std::vector<std::pair<double, PotentialSequence>>& terms) {
  if (terms.empty()) throw ConfigError("scale_and_add: no terms");
  const Sft& sft = terms[0].second.sft();
  bool all_additive = true;
  bool all_constant = true;
  int slack = 0;
  for (const auto& [c, seq] : terms) {
    if (!(seq.sft() == sft))
      throw DomainError("scale_and_add: sequences live on different shift spaces");
    all_additive = all_additive && seq.kind() == SequenceKind::additive;
    all_constant = all_constant && seq.cylinder_constant();
    slack = std::max(slack, seq.slack());
  }
  if (all_additive) {
    LocallyConstantPotential g = *terms[0].second.generator() * terms[0].first;
    for (std::size_t i = 1; i < terms.size(); ++i)
      g = g + (*terms[i].second.generator() * terms[i].first);
    return PotentialSequence::additive(std::move(g));
  }
  PotentialSequence s;
  s.kind_ = SequenceKind::custom;
  s.sft_ = sft;
  s.cylinder_constant_ = all_constant && slack == 0;
  s.slack_ = slack;
  for (const auto& [c, seq] : terms)
    s.combo_.emplace_back(c, std::make_shared<PotentialSequence>(seq));
  return s;
}

AdditivityReport almost_additivity_constant(const PotentialSequence& seq, int N, std::uint64_t cap,
                                            double tol) {
  if (N < 2) throw DomainError("almost_additivity_constant: horizon must be >= 2");
  AdditivityReport rep;
  rep.horizon = N;
  rep.tolerance = tol;
  rep.c_by_total.assign(static_cast<std::size_t>(N) + 1, 0.0);

  // Per-length value tables over window(l)-words.
  const Sft& sft = seq.sft();
  std::vector<WordIndex> index(static_cast<std::size_t>(N) + 1);
  std::vector<std::vector<Interval>> table(static_cast<std::size_t>(N) + 1);
  for (int l = 1; l <= N; ++l) {
    index[static_cast<std::size_t>(l)] = WordIndex(sft, seq.window(l), cap);
    auto& tab = table[static_cast<std::size_t>(l)];
    tab.resize(index[static_cast<std::size_t>(l)].size());
    auto cur = seq.cursor();
    std::size_t rank = 0;
    walk_words(
        sft, seq.window(l), cap, [&](int, Symbol a) { cur->push(a); }, [&] { cur->pop(); },
        [&](WordView) { tab[rank++] = cur->bounds(l); });
  }

  double worst = 0.0;
  for (int n = 1; n < N; ++n) {
    for (int m = 1; n + m <= N; ++m) {
      const int total = n + m;
      const WordIndex& whole_ix = index[static_cast<std::size_t>(total)];
      const WordIndex& head_ix = index[static_cast<std::size_t>(n)];
      const WordIndex& tail_ix = index[static_cast<std::size_t>(m)];
      double pair_worst = 0.0;
      for (std::size_t r = 0; r < whole_ix.size(); ++r) {
        WordView w = whole_ix.word(r);
        const Interval whole = table[static_cast<std::size_t>(total)][r];
        const Interval head = table[static_cast<std::size_t>(n)][head_ix.rank(
            w.subspan(0, static_cast<std::size_t>(seq.window(n))))];
        const Interval tail = table[static_cast<std::size_t>(m)][tail_ix.rank(
            w.subspan(static_cast<std::size_t>(n), static_cast<std::size_t>(seq.window(m))))];
        // Largest possible |f_{n+m} - f_n - f_m o T^n| on the cylinder.
        const double up = whole.hi - head.lo - tail.lo;
        const double dn = head.hi + tail.hi - whole.lo;
        pair_worst = std::max(pair_worst, std::max(std::abs(up), std::abs(dn)));
      }
      rep.table.emplace_back(n, m, pair_worst);
      worst = std::max(worst, pair_worst);
      auto& slot = rep.c_by_total[static_cast<std::size_t>(total)];
      slot = std::max(slot, pair_worst);
    }
  }
  for (int t = 3; t <= N; ++t)
    rep.c_by_total[static_cast<std::size_t>(t)] =
        std::max(rep.c_by_total[static_cast<std::size_t>(t)],
                 rep.c_by_total[static_cast<std::size_t>(t) - 1]);
  rep.c_estimate = worst;

  if (worst <= tol) {
    rep.classification = AdditivityClass::additive;
  } else {
    // Plateau heuristic: the running max stopped growing over the last half.
    const double half = rep.c_by_total[static_cast<std::size_t>(std::max(2, N / 2))];
    rep.classification = (worst <= 1.05 * half) ? AdditivityClass::almost_additive_evidence
                                                : AdditivityClass::inconclusive;
  }
  return rep;
}

namespace {

struct DefectExtrema {
  double u_min = std::numeric_limits<double>::infinity();
  double u_max = -std::numeric_limits<double>::infinity();
};

// Extrema of f_n - S_n f over X by one depth-first sweep over the cylinder
// tree, carrying the sequence cursor and the candidate's partial path sums.
// Additive sequences shortcut to max-plus dynamic programming on S_n(g - f).
DefectExtrema defect_extrema_scan(const PotentialSequence& seq, const LocallyConstantPotential& f,
                                  int n, std::uint64_t cap) {
  if (!(seq.sft() == f.sft()))
    throw DomainError("defect scan: sequence and potential live on different shift spaces");
  if (seq.kind() == SequenceKind::additive) {
    const BirkhoffExtrema e = birkhoff_extrema(*seq.generator() - f, n, cap);
    return {e.min_value, e.max_value};
  }
  const int L = std::max(seq.window(n), n + f.depth() - 1);
  auto cur = seq.cursor();
  std::vector<double> cum;
  cum.push_back(0.0);
  Word prefix;
  DefectExtrema out;
  const int k = f.depth();
  walk_words(
      seq.sft(), L, cap,
      [&](int, Symbol a) {
        prefix.push_back(a);
        cur->push(a);
        const int d = static_cast<int>(prefix.size());
        if (d >= k && d - k + 1 <= n)
          cum.push_back(cum.back() +
                        f.value(WordView(prefix).subspan(static_cast<std::size_t>(d - k))));
      },
      [&] {
        const int d = static_cast<int>(prefix.size());
        if (d >= k && d - k + 1 <= n) cum.pop_back();
        cur->pop();
        prefix.pop_back();
      },
      [&](WordView) {
        const Interval fn = cur->bounds(n);
        const double sn = cum.back();
        out.u_min = std::min(out.u_min, fn.lo - sn);
        out.u_max = std::max(out.u_max, fn.hi - sn);
      });
  return out;
}

}  // namespace

DefectTrace asymptotic_defect(const PotentialSequence& seq, const LocallyConstantPotential& f,
                              std::span<const int> n_list, std::uint64_t cap) {
  DefectTrace trace;
  for (int n : n_list) {
    if (n < 1) throw DomainError("asymptotic_defect: n must be >= 1");
    const DefectExtrema e = defect_extrema_scan(seq, f, n, cap);
    trace.points.push_back({n, std::max(std::abs(e.u_min), std::abs(e.u_max)) / n});
  }
  trace.tail_max.assign(trace.points.size(), 0.0);
  double running = 0.0;
  for (std::size_t i = trace.points.size(); i-- > 0;) {
    running = std::max(running, trace.points[i].delta);
    trace.tail_max[i] = running;
  }
  return trace;
}

namespace detail {

std::pair<double, double> correction_extrema(const PotentialSequence& seq,
                                             const LocallyConstantPotential& f, int n,
                                             std::uint64_t cap) {
  const DefectExtrema e = defect_extrema_scan(seq, f, n, cap);
  return {e.u_min, e.u_max};
}

}  // namespace detail

VariationReport variation_profile(const PotentialSequence& seq, int N, std::uint64_t cap) {
  if (N < 1) throw DomainError("variation_profile: horizon must be >= 1");
  VariationReport rep;
  rep.horizon = N;
  rep.var_n.assign(static_cast<std::size_t>(N), 0.0);
  if (!seq.cylinder_constant()) {
    for (int n = 1; n <= N; ++n) {
      double worst = 0.0;
      auto cur = seq.cursor();
      walk_words(
          seq.sft(), n, cap, [&](int, Symbol a) { cur->push(a); }, [&] { cur->pop(); },
          [&](WordView) { worst = std::max(worst, cur->bounds(n).width()); });
      rep.var_n[static_cast<std::size_t>(n) - 1] = worst;
    }
  }
  rep.moderate_trend.resize(rep.var_n.size());
  for (int n = 1; n <= N; ++n)
    rep.moderate_trend[static_cast<std::size_t>(n) - 1] =
        rep.var_n[static_cast<std::size_t>(n) - 1] / n;
  double first_half = 0.0, whole = 0.0;
  for (int n = 1; n <= N; ++n) {
    whole = std::max(whole, rep.var_n[static_cast<std::size_t>(n) - 1]);
    if (n <= std::max(1, N / 2))
      first_half = std::max(first_half, rep.var_n[static_cast<std::size_t>(n) - 1]);
  }
  rep.bounded_flag = whole <= 1.05 * first_half + kDefaultTolerance;
  return rep;
}

}  // namespace nadd
