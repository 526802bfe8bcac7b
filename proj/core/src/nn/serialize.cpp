#include "emac/nn/serialize.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "emac/csv.hpp"

namespace emac::nn {

namespace {

double read_value(std::istream& in) {
  std::string token;
  if (!(in >> token)) throw std::runtime_error("mlp dump truncated");
  try {
    return csv::parse_double(token);
  } catch (const std::invalid_argument&) {
    throw std::runtime_error("malformed mlp value '" + token + "'");
  }
}

}  // namespace

void write_mlp(std::ostream& out, const Mlp& mlp) {
  out << "mlp v1\n";
  out << "dims " << mlp.dims().size();
  for (int d : mlp.dims()) out << ' ' << d;
  out << '\n';
  for (std::size_t l = 0; l < mlp.layer_count(); ++l) {
    const DenseLayer& layer = mlp.layer(l);
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
        if (c) out << ' ';
        out << csv::format_double(layer.weight(r, c));
      }
      out << '\n';
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) {
      if (r) out << ' ';
      out << csv::format_double(layer.bias(r));
    }
    out << '\n';
  }
}

Mlp read_mlp(std::istream& in) {
  std::string tag, version;
  if (!(in >> tag >> version) || tag != "mlp" || version != "v1") {
    throw std::runtime_error("not an mlp v1 dump");
  }
  std::string dims_tag;
  std::size_t count = 0;
  if (!(in >> dims_tag >> count) || dims_tag != "dims" || count < 2 || count > 64) {
    throw std::runtime_error("malformed mlp dims line");
  }
  std::vector<int> dims(count);
  for (int& d : dims) {
    if (!(in >> d)) throw std::runtime_error("malformed mlp dims line");
  }
  Mlp mlp(dims);
  for (auto& layer : mlp.mutable_layers()) {
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = read_value(in);
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias(r) = read_value(in);
  }
  return mlp;
}

}  // namespace emac::nn
