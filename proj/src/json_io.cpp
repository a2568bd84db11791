#include "nadd/json_io.hpp"

namespace nadd {

namespace {

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("matrix must be a nonempty array of rows");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[static_cast<std::size_t>(i)].size()) != cols)
      throw ConfigError("matrix rows must have equal length");
    for (int k = 0; k < cols; ++k)
      m.at(i, k) = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].get<double>();
  }
  return m;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows; ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols; ++j) row.push_back(m.at(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Matrix> symbol_matrices_from_json(const Json& j, const char* what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + " must map symbol strings to matrices");
  std::vector<Matrix> out(j.size());
  for (const auto& [key, value] : j.items()) {
    const Word w = word_from_string(key);
    if (w.size() != 1 || w[0] >= out.size())
      throw ConfigError(std::string(what) + ": key '" + key + "' is not a symbol in range");
    out[w[0]] = matrix_from_json(value);
  }
  for (const Matrix& m : out)
    if (m.rows == 0) throw ConfigError(std::string(what) + ": missing a symbol entry");
  return out;
}

}  // namespace

Json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json to_json(const Sft& sft) {
  Json j;
  j["alphabet_size"] = sft.alphabet_size();
  if (sft.is_full_shift()) {
    j["full_shift"] = true;
  } else {
    Json rows = Json::array();
    for (int a = 0; a < sft.alphabet_size(); ++a) {
      Json row = Json::array();
      for (int b = 0; b < sft.alphabet_size(); ++b)
        row.push_back(sft.admissible(static_cast<Symbol>(a), static_cast<Symbol>(b)) ? 1 : 0);
      rows.push_back(std::move(row));
    }
    j["transitions"] = std::move(rows);
  }
  return j;
}

Sft sft_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("sft: expected an object");
  if (!j.contains("alphabet_size")) throw ConfigError("sft: missing alphabet_size");
  const int n = j["alphabet_size"].get<int>();
  if (j.value("full_shift", false)) return Sft::full_shift(n);
  if (!j.contains("transitions"))
    throw ConfigError("sft: need either full_shift: true or a transitions matrix");
  const Json& t = j["transitions"];
  std::vector<std::vector<int>> rows;
  for (const auto& row : t) rows.push_back(row.get<std::vector<int>>());
  return Sft(n, rows);
}

Json to_json(const LocallyConstantPotential& f) {
  Json j;
  j["depth"] = f.depth();
  Json values = Json::object();
  for (std::size_t r = 0; r < f.index().size(); ++r)
    values[word_to_string(f.index().word(r))] = f.value_by_rank(r);
  j["values"] = std::move(values);
  return j;
}

LocallyConstantPotential potential_from_json(const Sft& sft, const Json& j) {
  if (!j.is_object()) throw ConfigError("potential: expected an object");
  if (j.contains("constant")) {
    return LocallyConstantPotential::constant(sft, j["constant"].get<double>());
  }
  if (!j.contains("depth") || !j.contains("values"))
    throw ConfigError("potential: need depth and values");
  const int depth = j["depth"].get<int>();
  WordIndex ix(sft, depth);
  std::vector<double> values(ix.size());
  std::vector<bool> seen(ix.size(), false);
  for (const auto& [key, value] : j["values"].items()) {
    const Word w = word_from_string(key);
    auto r = ix.find(w);
    if (!r) throw ConfigError("potential: word '" + key + "' is not admissible at this depth");
    values[*r] = value.get<double>();
    seen[*r] = true;
  }
  for (std::size_t r = 0; r < ix.size(); ++r)
    if (!seen[r])
      throw ConfigError("potential: missing value for word '" + word_to_string(ix.word(r)) + "'");
  return LocallyConstantPotential(sft, depth, std::move(values));
}

Json to_json(const Sft& sft, const PotentialSequence& seq) {
  Json j;
  j["kind"] = to_string(seq.kind());
  switch (seq.kind()) {
    case SequenceKind::additive:
      j["potential"] = to_json(*seq.generator());
      break;
    case SequenceKind::cocycle: {
      const MatrixCocycle& c = *seq.cocycle_data();
      j["dimension"] = c.dimension();
      Json mats = Json::object();
      for (int a = 0; a < sft.alphabet_size(); ++a)
        mats[word_to_string(Word{static_cast<Symbol>(a)})] = matrix_to_json(c.matrix(static_cast<Symbol>(a)));
      j["matrices"] = std::move(mats);
      j["norm"] = to_string(c.norm_kind());
      break;
    }
    case SequenceKind::measure_log: {
      Json m = to_json(*seq.measure_data());
      j["p"] = m["p"];
      j["N"] = m["N"];
      break;
    }
    case SequenceKind::custom:
      j["note"] = "custom sequences have no serialized form";
      break;
  }
  return j;
}

PotentialSequence sequence_from_json(const Sft& sft, const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("sequence: need a kind");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "additive") {
    if (!j.contains("potential")) throw ConfigError("sequence: additive kind needs a potential");
    return PotentialSequence::additive(potential_from_json(sft, j["potential"]));
  }
  if (kind == "cocycle") {
    if (!j.contains("matrices")) throw ConfigError("sequence: cocycle kind needs matrices");
    auto mats = symbol_matrices_from_json(j["matrices"], "cocycle matrices");
    const std::string norm = j.value("norm", "entry_sum");
    if (norm != "entry_sum" && norm != "operator_two")
      throw ConfigError("sequence: unknown cocycle norm '" + norm + "'");
    MatrixCocycle c(std::move(mats),
                    norm == "entry_sum" ? CocycleNorm::entry_sum : CocycleNorm::operator_two);
    if (j.contains("dimension") && j["dimension"].get<int>() != c.dimension())
      throw ConfigError("sequence: declared dimension does not match the matrices");
    return PotentialSequence::cocycle(sft, std::move(c));
  }
  if (kind == "measure_log") {
    return PotentialSequence::measure_log(sft, measure_from_json(j));
  }
  throw ConfigError("sequence: unknown kind '" + kind + "'");
}

Json to_json(const CylinderMeasure& mu) {
  Json j;
  j["p"] = mu.stationary();
  Json mats = Json::object();
  for (int a = 0; a < mu.symbol_count(); ++a)
    mats[word_to_string(Word{static_cast<Symbol>(a)})] = matrix_to_json(mu.emission(static_cast<Symbol>(a)));
  j["N"] = std::move(mats);
  return j;
}

CylinderMeasure measure_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("N"))
    throw ConfigError("measure: need emission matrices under key N");
  auto mats = symbol_matrices_from_json(j["N"], "measure emissions");
  std::vector<double> p;
  if (j.contains("p")) p = j["p"].get<std::vector<double>>();
  return CylinderMeasure(std::move(mats), std::move(p));
}

Json to_json(const MarkovMeasure& mu) {
  Json j;
  j["order"] = mu.order();
  Json states = Json::array();
  for (std::size_t u = 0; u < mu.states().size(); ++u)
    states.push_back(word_to_string(mu.states().word(u)));
  j["states"] = std::move(states);
  Json kernel = Json::array();
  for (const auto& row : mu.kernel()) kernel.push_back(row);
  j["kernel"] = std::move(kernel);
  j["stationary"] = mu.stationary();
  return j;
}

Json to_json(const SeminormReport& r) {
  Json j;
  j["value"] = r.value;
  j["max_mean"] = r.max_mean;
  j["min_mean"] = r.min_mean;
  j["max_witness"] = word_to_string(r.max_witness.cycle);
  j["min_witness"] = word_to_string(r.min_witness.cycle);
  if (!r.birkhoff_trace.empty()) {
    Json t = Json::array();
    for (auto [n, v] : r.birkhoff_trace) t.push_back(Json{{"n", n}, {"norm_over_n", v}});
    j["birkhoff_trace"] = std::move(t);
    j["final_gap"] = r.final_gap;
  }
  return j;
}

Json to_json(const BirkhoffExtrema& e) {
  Json j;
  j["n"] = e.n;
  j["min_value"] = e.min_value;
  j["max_value"] = e.max_value;
  j["argmin_word"] = word_to_string(e.argmin_word);
  j["argmax_word"] = word_to_string(e.argmax_word);
  return j;
}

Json to_json(const AdditivityReport& r) {
  Json j;
  j["horizon"] = r.horizon;
  j["c_estimate"] = r.c_estimate;
  j["classification"] = to_string(r.classification);
  j["tolerance"] = r.tolerance;
  Json t = Json::array();
  for (auto [n, m, v] : r.table) t.push_back(Json{{"n", n}, {"m", m}, {"defect", v}});
  j["table"] = std::move(t);
  j["c_by_total"] = r.c_by_total;
  return j;
}

Json to_json(const VariationReport& r) {
  Json j;
  j["horizon"] = r.horizon;
  j["var_n"] = r.var_n;
  j["bounded_flag"] = r.bounded_flag;
  j["moderate_trend"] = r.moderate_trend;
  return j;
}

Json to_json(const DefectTrace& t) {
  Json j = Json::array();
  for (std::size_t i = 0; i < t.points.size(); ++i)
    j.push_back(Json{{"n", t.points[i].n},
                     {"delta", t.points[i].delta},
                     {"tail_max", t.tail_max[i]}});
  return j;
}

Json to_json(const CauchyTable& t) {
  Json j;
  j["k_grid"] = t.k_grid;
  Json rows = Json::array();
  for (const auto& row : t.dist) rows.push_back(row);
  j["distances"] = std::move(rows);
  return j;
}

Json to_json(const EquivalenceCertificate& c) {
  Json j;
  j["version"] = "cert_v1";
  j["k_star"] = c.k_star;
  j["representative"] = to_json(c.representative);
  j["cauchy_table"] = to_json(c.cauchy);
  j["defect_trace"] = to_json(c.defect_trace);
  j["tail_bound"] = c.tail_bound;
  j["tolerance"] = c.tolerance;
  j["tolerance_met"] = c.tolerance_met;
  return j;
}

Json to_json(const PressureEstimate& e) {
  Json j;
  Json t = Json::array();
  for (std::size_t i = 0; i < e.ns.size(); ++i)
    t.push_back(Json{{"n", e.ns[i]}, {"log_Zn_over_n", e.finite_n[i]}});
  j["finite_n"] = std::move(t);
  j["point"] = e.point;
  if (e.lower) {
    j["lower"] = *e.lower;
    j["upper"] = *e.upper;
  }
  return j;
}

Json to_json(const LyapunovTrace& t) {
  Json j;
  Json tr = Json::array();
  for (auto [n, v] : t.trace) tr.push_back(Json{{"n", n}, {"average", v}});
  j["trace"] = std::move(tr);
  j["value"] = t.value;
  return j;
}

Json to_json(const GibbsReport& r) {
  Json j;
  Json t = Json::array();
  for (std::size_t i = 0; i < r.ns.size(); ++i)
    t.push_back(Json{{"n", r.ns[i]}, {"log_Kn", r.log_Kn[i]}, {"trend", r.trend[i]}});
  j["constants"] = std::move(t);
  j["verdict"] = to_string(r.verdict);
  if (r.witness) j["witness"] = word_to_string(*r.witness);
  j["p_target"] = r.p_target;
  j["thresholds"] = Json{{"gibbs_growth", r.thresholds.gibbs_growth},
                         {"weak_decay", r.thresholds.weak_decay}};
  return j;
}

Json to_json(const QuasiBernoulliReport& r) {
  Json j;
  Json t = Json::array();
  for (std::size_t i = 0; i < r.ns.size(); ++i)
    t.push_back(Json{{"n", r.ns[i]}, {"log_Dn", r.log_Dn[i]}});
  j["constants"] = std::move(t);
  j["verdict"] = to_string(r.verdict);
  if (r.witness) j["witness"] = word_to_string(*r.witness);
  j["thresholds"] = Json{{"gibbs_growth", r.thresholds.gibbs_growth},
                         {"weak_decay", r.thresholds.weak_decay}};
  return j;
}

Json to_json(const PressureCurve& c) {
  Json j = Json::array();
  for (std::size_t i = 0; i < c.q.size(); ++i)
    j.push_back(Json{{"q", c.q[i]}, {"P", c.P[i]}, {"dP", c.dP[i]}});
  return j;
}

Json to_json(const SpectrumResult& s) {
  Json j;
  Json pts = Json::array();
  for (std::size_t i = 0; i < s.alpha.size(); ++i)
    pts.push_back(Json{{"alpha", s.alpha[i]}, {"E", json_number(s.E[i])}, {"band", s.band}});
  j["points"] = std::move(pts);
  j["alpha_min"] = s.alpha_min;
  j["alpha_max"] = s.alpha_max;
  j["band"] = s.band;
  j["degenerate"] = s.degenerate;
  return j;
}

Json to_json(const RateFunction& r) {
  Json j;
  Json pts = Json::array();
  for (std::size_t i = 0; i < r.x.size(); ++i)
    pts.push_back(Json{{"x", r.x[i]}, {"I", json_number(r.I[i])}});
  j["points"] = std::move(pts);
  j["minimizer"] = r.minimizer;
  j["value_at_minimizer"] = r.value_at_minimizer;
  return j;
}

std::vector<double> grid_from_json(const Json& j) {
  if (j.is_array()) {
    auto v = j.get<std::vector<double>>();
    if (v.empty()) throw ConfigError("grid: empty array");
    return v;
  }
  if (j.is_object() && j.contains("lo") && j.contains("hi") && j.contains("count")) {
    const double lo = j["lo"].get<double>(), hi = j["hi"].get<double>();
    const int n = j["count"].get<int>();
    if (n < 2 || hi <= lo) throw ConfigError("grid: need count >= 2 and hi > lo");
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
  }
  throw ConfigError("grid: expected an array or {lo, hi, count}");
}

std::vector<int> int_grid_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("k_grid: expected a nonempty array");
  return j.get<std::vector<int>>();
}

}  // namespace nadd
