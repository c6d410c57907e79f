#include "ordstat/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ordstat/errors.hpp"

namespace ordstat {

const char* to_string(Order order) { return order == Order::ascending ? "ascending" : "descending"; }

Weights::Weights(Eigen::VectorXd values, Order order) : values_(std::move(values)), order_(order) {
  if (values_.size() == 0) throw DomainError("weights: empty vector");
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
      std::ostringstream msg;
      msg << "weights: entry " << i + 1 << " is not a positive finite number (" << values_[i] << ")";
      throw DomainError(msg.str());
    }
    if (i == 0) continue;
    const bool bad = order_ == Order::ascending ? values_[i] < values_[i - 1]
                                                : values_[i] > values_[i - 1];
    if (bad) {
      std::ostringstream msg;
      msg << "weights: entry " << i + 1 << " breaks " << to_string(order_) << " order ("
          << values_[i - 1] << " then " << values_[i] << ")";
      throw DomainError(msg.str());
    }
  }
}

Weights Weights::sorted(Eigen::VectorXd values, Order order) {
  if (order == Order::ascending) {
    std::sort(values.begin(), values.end());
  } else {
    std::sort(values.begin(), values.end(), std::greater<>());
  }
  return Weights(std::move(values), order);
}

Weights Weights::reversed() const {
  return Weights(values_.reverse().eval(),
                 order_ == Order::ascending ? Order::descending : Order::ascending);
}

Eigen::VectorXd Weights::read_csv(std::istream& in) {
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    double v = 0.0;
    std::size_t used = 0;
    bool ok = true;
    try {
      v = std::stod(line.substr(first), &used);
    } catch (const std::exception&) {
      ok = false;
    }
    if (ok) ok = line.find_first_not_of(" \t", first + used) == std::string::npos;
    if (!ok || !(v > 0.0) || !std::isfinite(v)) {
      throw ParseError("weights csv line " + std::to_string(lineno) +
                           ": expected one positive decimal, got `" + line + "`",
                       lineno);
    }
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("weights csv: no values", lineno);
  return Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

Eigen::VectorXd Weights::read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open weights file " + path.string(), 0);
  return read_csv(in);
}

}  // namespace ordstat
