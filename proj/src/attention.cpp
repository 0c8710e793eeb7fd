#include "simplicial/attention.hpp"

#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "simplicial/io.hpp"

namespace simplicial {

namespace {

void check_shape(const Matrix& m, std::size_t rows, std::size_t cols, const std::string& what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DimensionError(what + " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                         ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (!all_finite(m.values())) throw ArgumentError(what + " has non-finite entries");
}

}  // namespace

SimplicialParams::SimplicialParams(std::size_t order, std::vector<HeadWeights> heads, Matrix output)
    : order_(order), heads_(std::move(heads)), output_(std::move(output)) {
  if (order_ == 0) throw ArgumentError("order must be at least 1");
  if (heads_.empty()) throw ArgumentError("at least one head is required");
  const auto& first = heads_.front();
  if (first.keys.empty()) throw DimensionError("head 0 has no key matrices");
  dim_ = first.keys.front().rows();
  head_dim_ = first.keys.front().cols();
  if (dim_ == 0 || head_dim_ == 0) throw DimensionError("weight matrices must be non-empty");
  for (std::size_t h = 0; h < heads_.size(); ++h) {
    const auto& hw = heads_[h];
    const std::string tag = "head " + std::to_string(h);
    if (hw.keys.size() != order_ + 1) {
      throw DimensionError(tag + " has " + std::to_string(hw.keys.size()) + " key matrices, expected " +
                           std::to_string(order_ + 1));
    }
    if (hw.values.size() != order_) {
      throw DimensionError(tag + " has " + std::to_string(hw.values.size()) +
                           " value matrices, expected " + std::to_string(order_));
    }
    for (std::size_t i = 0; i < hw.keys.size(); ++i)
      check_shape(hw.keys[i], dim_, head_dim_, tag + " key " + std::to_string(i));
    for (std::size_t i = 0; i < hw.values.size(); ++i)
      check_shape(hw.values[i], dim_, head_dim_, tag + " value " + std::to_string(i + 1));
  }
  check_shape(output_, heads_.size() * head_dim_, dim_, "output projection");
}

SimplicialParams SimplicialParams::single_head(std::vector<Matrix> keys, std::vector<Matrix> values) {
  if (keys.empty()) throw DimensionError("no key matrices");
  const std::size_t order = keys.size() - 1;
  const std::size_t d = keys.front().rows();
  if (keys.front().cols() != d) throw DimensionError("single_head needs square d x d weights");
  return SimplicialParams(order, {HeadWeights{std::move(keys), std::move(values)}}, Matrix::identity(d));
}

SimplicialParams SimplicialParams::random(std::size_t order, std::size_t dim, std::size_t heads,
                                          double weight_scale, Rng& rng) {
  if (order == 0 || dim == 0 || heads == 0) throw ArgumentError("order, dim and heads must be positive");
  if (dim % heads != 0) {
    throw ArgumentError("dim " + std::to_string(dim) + " is not divisible by " + std::to_string(heads) +
                        " heads");
  }
  if (!(weight_scale >= 0.0)) throw ArgumentError("weight_scale must be non-negative");
  const std::size_t dh = dim / heads;
  std::vector<HeadWeights> hw(heads);
  for (auto& h : hw) {
    for (std::size_t i = 0; i <= order; ++i) h.keys.push_back(rng.uniform_matrix(dim, dh, weight_scale));
    for (std::size_t i = 0; i < order; ++i) h.values.push_back(rng.uniform_matrix(dim, dh, weight_scale));
  }
  return SimplicialParams(order, std::move(hw), Matrix::identity(dim));
}

OrderReduction reduce_order(const SimplicialParams& params, const Matrix& x, std::size_t head) {
  const std::size_t order = params.order();
  if (order < 2) throw ArgumentError("reduce_order needs order >= 2");
  if (x.cols() != params.dim() || x.rows() == 0) throw DimensionError("reduce_order: X has wrong shape");
  const std::size_t n = x.rows();
  const std::size_t dh = params.head_dim();
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  // Axes 0 and 1 keep the n real tokens; later axes gain a ones row at index n.
  auto keys = project(x, params.head(head).keys);
  std::vector<std::size_t> shape(order + 1, n + 1);
  shape[0] = shape[1] = n;
  for (std::size_t i = 2; i <= order; ++i) {
    Matrix aug(n + 1, dh, 1.0);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t a = 0; a < dh; ++a) aug(r, a) = keys[i](r, a);
    keys[i] = std::move(aug);
  }

  OrderReduction out;
  out.augmented = DenseTensor(shape);
  std::vector<std::size_t> idx(order + 1, 0);
  for (std::size_t flat = 0; flat < out.augmented.size(); ++flat) {
    double acc = 0.0;
    for (std::size_t a = 0; a < dh; ++a) {
      double p = keys[0](idx[0], a);
      for (std::size_t i = 1; i <= order; ++i) p *= keys[i](idx[i], a);
      acc += p;
    }
    out.augmented[flat] = scale * acc;
    for (std::size_t axis = order + 1; axis-- > 0;) {
      if (++idx[axis] < shape[axis]) break;
      idx[axis] = 0;
    }
  }

  auto plain = project(x, params.head(head).keys);
  for (std::size_t m = 1; m <= order; ++m) {
    auto slice = DenseTensor::cube(n, m + 1);
    std::vector<std::size_t> sub(m + 1, 0);
    std::vector<std::size_t> full(order + 1, n);
    std::size_t flat = 0;
    do {
      std::copy(sub.begin(), sub.end(), full.begin());
      slice[flat++] = out.augmented.at(full);
    } while (next_index(sub, n));
    out.slices.push_back(std::move(slice));
    std::vector<Matrix> first(plain.begin(), plain.begin() + static_cast<std::ptrdiff_t>(m + 1));
    out.direct.push_back(contract_logits(first, scale));
  }
  return out;
}

void write_params(std::ostream& out, const SimplicialParams& params) {
  nlohmann::json header;
  header["format"] = "simplicial-params";
  header["version"] = 1;
  header["order"] = params.order();
  header["dim"] = params.dim();
  header["heads"] = params.head_count();
  header["head_dim"] = params.head_dim();
  auto blocks = nlohmann::json::array();
  for (std::size_t h = 0; h < params.head_count(); ++h) {
    for (std::size_t i = 0; i <= params.order(); ++i)
      blocks.push_back({{"name", "head" + std::to_string(h) + ".key" + std::to_string(i)},
                        {"rows", params.dim()},
                        {"cols", params.head_dim()}});
    for (std::size_t i = 1; i <= params.order(); ++i)
      blocks.push_back({{"name", "head" + std::to_string(h) + ".value" + std::to_string(i)},
                        {"rows", params.dim()},
                        {"cols", params.head_dim()}});
  }
  blocks.push_back({{"name", "output"}, {"rows", params.output().rows()}, {"cols", params.output().cols()}});
  header["blocks"] = blocks;
  out << header.dump() << '\n';
  for (const auto& hw : params.heads()) {
    for (const auto& k : hw.keys) write_matrix(out, k);
    for (const auto& v : hw.values) write_matrix(out, v);
  }
  write_matrix(out, params.output());
}

SimplicialParams read_params(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty parameter file");
  nlohmann::json header;
  std::size_t order = 0, heads = 0;
  try {
    header = nlohmann::json::parse(line);
    if (header.at("format") != "simplicial-params") throw ParseError("not a parameter file");
    if (header.at("version") != 1) throw ParseError("unsupported parameter file version");
    order = header.at("order").get<std::size_t>();
    heads = header.at("heads").get<std::size_t>();
    for (const auto& meta : header.at("blocks")) {
      meta.at("name").get<std::string>();
      meta.at("rows").get<std::size_t>();
      meta.at("cols").get<std::size_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("parameter header: ") + e.what());
  }
  const auto& blocks = header.at("blocks");
  if (blocks.size() != heads * (2 * order + 1) + 1) throw ParseError("parameter block count mismatch");
  std::size_t b = 0;
  auto next = [&]() {
    Matrix m = read_matrix(in);
    const auto& meta = blocks[b++];
    if (m.rows() != meta.at("rows").get<std::size_t>() || m.cols() != meta.at("cols").get<std::size_t>()) {
      throw ParseError("block " + meta.at("name").get<std::string>() + " has the wrong shape");
    }
    return m;
  };
  std::vector<HeadWeights> hw(heads);
  for (auto& h : hw) {
    for (std::size_t i = 0; i <= order; ++i) h.keys.push_back(next());
    for (std::size_t i = 0; i < order; ++i) h.values.push_back(next());
  }
  Matrix output = next();
  try {
    return SimplicialParams(order, std::move(hw), std::move(output));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

std::string format_params(const SimplicialParams& params) {
  std::ostringstream out;
  write_params(out, params);
  return out.str();
}

SimplicialParams parse_params(const std::string& text) {
  std::istringstream in(text);
  return read_params(in);
}

}  // namespace simplicial
