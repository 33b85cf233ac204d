#include "lingua/selection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "lingua/error.hpp"
#include "lingua/util.hpp"

namespace lingua {

std::string_view rank_method_name(RankMethod method) {
  return method == RankMethod::InformationGain ? "IG" : "RFE";
}

std::string Ranking::to_csv() const {
  std::ostringstream out;
  out << "rank,feature,score,method\n";
  for (const RankedFeature& f : entries) {
    out << f.rank << ',' << f.name << ',' << format_double(f.score) << ','
        << rank_method_name(method) << '\n';
  }
  return out.str();
}

double label_entropy(std::span<const Label> y) {
  if (y.empty()) return 0.0;
  const double n = static_cast<double>(y.size());
  const double p = static_cast<double>(std::count(y.begin(), y.end(), Label::Positive)) / n;
  double h = 0.0;
  for (double q : {p, 1.0 - p}) {
    if (q > 0.0) h -= q * std::log2(q);
  }
  return h;
}

std::vector<std::size_t> discretize(std::span<const double> values, std::size_t bins, Binning binning) {
  if (bins < 2) throw ValidationError("information gain needs at least two bins");
  std::vector<double> v(values.begin(), values.end());
  if (binning == Binning::Rank) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    for (std::size_t i = 0; i < order.size();) {
      std::size_t j = i;
      while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t t = i; t <= j; ++t) v[order[t]] = avg;
      i = j + 1;
    }
  }
  std::vector<std::size_t> out(v.size(), 0);
  if (v.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) return out;
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto b = static_cast<std::size_t>(std::floor((v[i] - lo) / width));
    out[i] = std::min(b, bins - 1);
  }
  return out;
}

double information_gain(std::span<const std::size_t> bins, std::span<const Label> y) {
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> table;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    auto& cell = table[bins[i]];
    (y[i] == Label::Positive ? cell.first : cell.second)++;
  }
  const double n = static_cast<double>(y.size());
  double conditional = 0.0;
  for (const auto& [bin, counts] : table) {
    const double m = static_cast<double>(counts.first + counts.second);
    double h = 0.0;
    for (std::size_t c : {counts.first, counts.second}) {
      if (c == 0) continue;
      const double q = static_cast<double>(c) / m;
      h -= q * std::log2(q);
    }
    conditional += m / n * h;
  }
  return std::max(0.0, label_entropy(y) - conditional);
}

Ranking information_gain(const Matrix& x, std::span<const std::string> names,
                         std::span<const Label> y, std::size_t bins, Binning binning) {
  if (x.rows() == 0 || x.cols() == 0) throw ValidationError("cannot rank features of an empty matrix");
  if (names.size() != x.cols() || y.size() != x.rows()) throw ValidationError("matrix shape mismatch");
  Ranking ranking{RankMethod::InformationGain, {}};
  std::vector<double> column(x.rows());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    for (std::size_t i = 0; i < x.rows(); ++i) column[i] = x(i, j);
    const auto binned = discretize(column, bins, binning);
    ranking.entries.push_back({names[j], information_gain(binned, y), 0});
  }
  std::sort(ranking.entries.begin(), ranking.entries.end(),
            [](const RankedFeature& a, const RankedFeature& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.name < b.name;
            });
  for (std::size_t r = 0; r < ranking.entries.size(); ++r) ranking.entries[r].rank = r + 1;
  return ranking;
}

Ranking rfe(const Matrix& x, std::span<const std::string> names, std::span<const Label> y,
            const SvmConfig& config, double drop_fraction, std::size_t target_k) {
  if (x.rows() == 0 || x.cols() == 0) throw ValidationError("cannot rank features of an empty matrix");
  if (names.size() != x.cols()) throw ValidationError("matrix shape mismatch");
  if (target_k < 1) throw ValidationError("RFE target must keep at least one feature");
  if (!(drop_fraction > 0.0 && drop_fraction < 1.0)) {
    throw ValidationError("RFE drop fraction must lie in (0, 1)");
  }
  target_k = std::min(target_k, x.cols());

  std::vector<std::size_t> surviving(x.cols());
  std::iota(surviving.begin(), surviving.end(), 0);
  // Eliminated batches, earliest first; each batch ordered most important first.
  std::vector<std::vector<RankedFeature>> rounds;

  const auto fit_weights = [&](const std::vector<std::size_t>& columns) {
    const Matrix sub = x.select_columns(columns);
    const SvmModel model = train_svm(sub, y, config);
    std::vector<RankedFeature> scored;
    for (std::size_t j = 0; j < columns.size(); ++j) {
      scored.push_back({names[columns[j]], model.w[j] * model.w[j], columns[j]});
    }
    // Importance descending; name breaks ties. `rank` temporarily holds the column.
    std::sort(scored.begin(), scored.end(), [](const RankedFeature& a, const RankedFeature& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.name < b.name;
    });
    return scored;
  };

  std::vector<RankedFeature> scored = fit_weights(surviving);
  while (surviving.size() > target_k) {
    const auto wanted = static_cast<std::size_t>(
        std::ceil(drop_fraction * static_cast<double>(surviving.size())));
    const std::size_t drop = std::min(std::max<std::size_t>(1, wanted), surviving.size() - target_k);
    std::vector<RankedFeature> eliminated(scored.end() - static_cast<std::ptrdiff_t>(drop), scored.end());
    scored.resize(scored.size() - drop);
    rounds.push_back(std::move(eliminated));
    surviving.clear();
    for (const RankedFeature& f : scored) surviving.push_back(f.rank);
    std::sort(surviving.begin(), surviving.end());
    scored = fit_weights(surviving);
  }

  Ranking ranking{RankMethod::Rfe, std::move(scored)};
  for (auto it = rounds.rbegin(); it != rounds.rend(); ++it) {
    ranking.entries.insert(ranking.entries.end(), it->begin(), it->end());
  }
  for (std::size_t r = 0; r < ranking.entries.size(); ++r) ranking.entries[r].rank = r + 1;
  return ranking;
}

}  // namespace lingua
