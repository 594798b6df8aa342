#include "mteval/dataset.hpp"

#include "mteval/errors.hpp"

namespace mteval {

const ScoreTable& Dataset::metric(const std::string& name) const {
  auto it = metrics.find(name);
  if (it == metrics.end()) throw ValidationError("unknown metric: " + name);
  return it->second;
}

std::vector<std::string> Dataset::metric_names() const {
  std::vector<std::string> names;
  names.reserve(metrics.size());
  for (const auto& [name, table] : metrics) names.push_back(name);
  return names;
}

}  // namespace mteval
