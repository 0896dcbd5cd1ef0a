#include "hcl/nmi.hpp"

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "hcl/errors.hpp"

namespace hcl {

double nmi(const Labeling& a, const Labeling& b, bool include_noise) {
  if (a.size() != b.size()) {
    throw InvalidInput("labelings differ in length");
  }
  // Contingency counts over the restriction set.
  std::map<std::uint32_t, std::size_t> count_a, count_b;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> joint;
  std::size_t total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!include_noise &&
        (a.label[i] == Labeling::kNoise || b.label[i] == Labeling::kNoise)) {
      continue;
    }
    ++count_a[a.label[i]];
    ++count_b[b.label[i]];
    ++joint[{a.label[i], b.label[i]}];
    ++total;
  }
  if (total == 0) {
    throw UndefinedMetric("NMI undefined: empty restriction set");
  }

  const double n = static_cast<double>(total);
  double h_a = 0.0, h_b = 0.0;
  for (const auto& [label, c] : count_a) {
    const double p = static_cast<double>(c) / n;
    h_a -= p * std::log(p);
  }
  for (const auto& [label, c] : count_b) {
    const double p = static_cast<double>(c) / n;
    h_b -= p * std::log(p);
  }
  // Convention: two constant labelings are the same one-block partition;
  // a single vanishing entropy carries no mutual information.
  if (count_a.size() <= 1 && count_b.size() <= 1) return 1.0;
  if (count_a.size() <= 1 || count_b.size() <= 1) return 0.0;

  double info = 0.0;
  for (const auto& [pair, c] : joint) {
    const double p_ab = static_cast<double>(c) / n;
    const double p_a = static_cast<double>(count_a[pair.first]) / n;
    const double p_b = static_cast<double>(count_b[pair.second]) / n;
    info += p_ab * std::log(p_ab / (p_a * p_b));
  }
  const double value = info / std::sqrt(h_a * h_b);
  return std::min(1.0, std::max(0.0, value));
}

}  // namespace hcl
