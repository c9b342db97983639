#include "fqmci/distribution.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fqmci {

GridSupport make_grid(double x_l, double delta, int num_qubits) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("make_grid: delta must be positive and finite");
  if (!std::isfinite(x_l)) throw std::invalid_argument("make_grid: x_l must be finite");
  if (num_qubits < 1 || num_qubits > kMaxAxisQubits)
    throw std::invalid_argument("make_grid: num_qubits out of [1, " +
                                std::to_string(kMaxAxisQubits) + "]");
  return GridSupport{x_l, delta, num_qubits};
}

DiscreteDistribution::DiscreteDistribution(std::vector<GridSupport> axes,
                                           Eigen::ArrayXd probs)
    : axes_(std::move(axes)), probs_(std::move(probs)) {
  if (axes_.empty()) throw std::invalid_argument("distribution: no axes");
  int qubits = 0;
  std::int64_t expect = 1;
  for (const auto& ax : axes_) {
    make_grid(ax.x_l, ax.delta, ax.num_qubits);  // revalidate
    qubits += ax.num_qubits;
    expect *= ax.size();
  }
  if (qubits > kMaxRegisterQubits)
    throw std::invalid_argument("distribution: total register exceeds " +
                                std::to_string(kMaxRegisterQubits) + " qubits");
  if (probs_.size() != expect)
    throw std::invalid_argument("distribution: expected " + std::to_string(expect) +
                                " masses, got " + std::to_string(probs_.size()));
  if ((probs_ < 0.0).any())
    throw std::invalid_argument("distribution: negative mass");
  double total = probs_.sum();
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("distribution: masses sum to " + std::to_string(total) +
                                ", not 1");
}

const GridSupport& DiscreteDistribution::axis(int j) const {
  if (j < 0 || j >= dimensions())
    throw std::invalid_argument("distribution: axis " + std::to_string(j) +
                                " out of range");
  return axes_[j];
}

int DiscreteDistribution::total_qubits() const {
  int qubits = 0;
  for (const auto& ax : axes_) qubits += ax.num_qubits;
  return qubits;
}

std::int64_t DiscreteDistribution::flat_index(
    const std::vector<std::int64_t>& index) const {
  if (index.size() != axes_.size())
    throw std::invalid_argument("distribution: index rank mismatch");
  std::int64_t flat = 0;
  for (std::size_t j = 0; j < axes_.size(); ++j) {
    if (index[j] < 0 || index[j] >= axes_[j].size())
      throw std::invalid_argument("distribution: index out of range on axis " +
                                  std::to_string(j));
    flat = flat * axes_[j].size() + index[j];
  }
  return flat;
}

double DiscreteDistribution::prob(const std::vector<std::int64_t>& index) const {
  return probs_[flat_index(index)];
}

DiscreteDistribution marginal(const DiscreteDistribution& dist, int axis) {
  const GridSupport& ax = dist.axis(axis);
  const int dims = dist.dimensions();

  // Strides of the row-major flat layout (axis 0 slowest).
  std::vector<std::int64_t> stride(dims, 1);
  for (int j = dims - 2; j >= 0; --j) stride[j] = stride[j + 1] * dist.axis(j + 1).size();

  Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(ax.size());
  const auto& p = dist.probs();
  for (std::int64_t flat = 0; flat < p.size(); ++flat)
    acc[(flat / stride[axis]) % ax.size()] += p[flat];

  // Rounded masses can drift a few ulps away from 1; renormalize so the
  // constructor's normalization check stays exact.
  acc /= acc.sum();
  return DiscreteDistribution({ax}, std::move(acc));
}

double brute_force_expectation(const DiscreteDistribution& dist,
                               const std::vector<int>& axes,
                               const std::vector<std::function<double(double)>>& fns) {
  if (axes.size() != fns.size())
    throw std::invalid_argument("brute_force_expectation: axes/fns size mismatch");
  if (axes.empty()) throw std::invalid_argument("brute_force_expectation: no axes");
  for (std::size_t a = 0; a < axes.size(); ++a) {
    dist.axis(axes[a]);
    for (std::size_t b = a + 1; b < axes.size(); ++b)
      if (axes[a] == axes[b])
        throw std::invalid_argument("brute_force_expectation: repeated axis");
  }

  const int dims = dist.dimensions();
  std::vector<std::int64_t> stride(dims, 1);
  for (int j = dims - 2; j >= 0; --j) stride[j] = stride[j + 1] * dist.axis(j + 1).size();

  const auto& p = dist.probs();
  double acc = 0.0;
  for (std::int64_t flat = 0; flat < p.size(); ++flat) {
    if (p[flat] == 0.0) continue;
    double term = p[flat];
    for (std::size_t k = 0; k < axes.size(); ++k) {
      const GridSupport& ax = dist.axis(axes[k]);
      std::int64_t v = (flat / stride[axes[k]]) % ax.size();
      term *= fns[k](ax.point(v));
    }
    acc += term;
  }
  return acc;
}

namespace {

std::vector<std::string> split_tokens(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, const std::string& context) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("distribution file: bad number '" + tok + "' in " +
                                context);
  }
  if (pos != tok.size())
    throw std::invalid_argument("distribution file: bad number '" + tok + "' in " +
                                context);
  return v;
}

}  // namespace

DiscreteDistribution load_distribution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open distribution file: " + path);

  int dimensions = -1;
  std::vector<std::string> x_l_tok, delta_tok, nq_tok;
  std::vector<double> masses;
  bool in_probs = false;

  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (in_probs) {
      if (eq != std::string::npos)
        throw std::invalid_argument("distribution file: probs must be the last key");
      for (const auto& tok : split_tokens(line))
        masses.push_back(parse_double(tok, "probs"));
      continue;
    }
    auto tokens = split_tokens(line);
    if (tokens.empty()) continue;
    if (eq == std::string::npos)
      throw std::invalid_argument("distribution file: expected key = value, got '" +
                                  line + "'");
    std::string key = tokens[0];
    std::vector<std::string> values(tokens.begin() + 2, tokens.end());
    if (tokens.size() < 2 || tokens[1] != "=")
      throw std::invalid_argument("distribution file: malformed line '" + line + "'");

    if (key == "dimensions") {
      if (values.size() != 1)
        throw std::invalid_argument("distribution file: dimensions wants one value");
      dimensions = static_cast<int>(parse_double(values[0], "dimensions"));
    } else if (key == "x_l") {
      x_l_tok = values;
    } else if (key == "delta") {
      delta_tok = values;
    } else if (key == "num_qubits") {
      nq_tok = values;
    } else if (key == "probs") {
      in_probs = true;
      for (const auto& tok : values) masses.push_back(parse_double(tok, "probs"));
    } else {
      throw std::invalid_argument("distribution file: unknown key '" + key + "'");
    }
  }

  if (dimensions < 1)
    throw std::invalid_argument("distribution file: missing or bad dimensions");
  auto want = static_cast<std::size_t>(dimensions);
  if (x_l_tok.size() != want || delta_tok.size() != want || nq_tok.size() != want)
    throw std::invalid_argument(
        "distribution file: x_l, delta, num_qubits must each have one entry per axis");
  if (!in_probs) throw std::invalid_argument("distribution file: missing probs");

  std::vector<GridSupport> axes;
  for (int j = 0; j < dimensions; ++j)
    axes.push_back(make_grid(parse_double(x_l_tok[j], "x_l"),
                             parse_double(delta_tok[j], "delta"),
                             static_cast<int>(parse_double(nq_tok[j], "num_qubits"))));

  Eigen::ArrayXd probs(static_cast<std::int64_t>(masses.size()));
  for (std::size_t i = 0; i < masses.size(); ++i) probs[i] = masses[i];
  return DiscreteDistribution(std::move(axes), std::move(probs));
}

void save_distribution(const DiscreteDistribution& dist, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write distribution file: " + path);
  char buf[64];
  out << "dimensions = " << dist.dimensions() << "\n";
  auto field = [&](const char* key, auto get) {
    out << key << " =";
    for (int j = 0; j < dist.dimensions(); ++j) {
      std::snprintf(buf, sizeof buf, " %.17g", static_cast<double>(get(dist.axis(j))));
      out << buf;
    }
    out << "\n";
  };
  field("x_l", [](const GridSupport& ax) { return ax.x_l; });
  field("delta", [](const GridSupport& ax) { return ax.delta; });
  field("num_qubits", [](const GridSupport& ax) { return ax.num_qubits; });
  out << "probs =";
  for (std::int64_t i = 0; i < dist.flat_size(); ++i) {
    std::snprintf(buf, sizeof buf, " %.17g", dist.probs()[i]);
    out << buf;
  }
  out << "\n";
}

}  // namespace fqmci
