#include "qfc/channel_json.hpp"

#include <fstream>
#include <sstream>

#include "qfc/error.hpp"

namespace qfc {

namespace {

std::size_t read_dim(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer()) {
    throw InvalidArgument(std::string("channel file: '") + key + "' must be an integer");
  }
  auto v = doc[key].get<long long>();
  if (v <= 0) throw InvalidArgument(std::string("channel file: '") + key + "' must be positive");
  return static_cast<std::size_t>(v);
}

ComplexMatrix read_matrix(const nlohmann::json& rows, std::size_t d_out, std::size_t d_in,
                          std::size_t which) {
  const std::string where = "channel file: kraus[" + std::to_string(which) + "]";
  if (!rows.is_array() || rows.size() != d_out) {
    throw InvalidArgument(where + " must have " + std::to_string(d_out) + " rows");
  }
  ComplexMatrix m(static_cast<Eigen::Index>(d_out), static_cast<Eigen::Index>(d_in));
  for (std::size_t r = 0; r < d_out; ++r) {
    const auto& row = rows[r];
    if (!row.is_array() || row.size() != d_in) {
      throw InvalidArgument(where + " row " + std::to_string(r) + " must have " +
                            std::to_string(d_in) + " entries");
    }
    for (std::size_t c = 0; c < d_in; ++c) {
      const auto& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw InvalidArgument(where + " entry must be a [real, imaginary] pair");
      }
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

}  // namespace

QuantumChannel channel_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InvalidArgument("channel file: top level must be an object");
  std::string name = "custom";
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw InvalidArgument("channel file: 'name' must be a string");
    name = doc["name"].get<std::string>();
  }
  const auto d_in = read_dim(doc, "d_in");
  const auto d_out = read_dim(doc, "d_out");
  if (!doc.contains("kraus") || !doc["kraus"].is_array() || doc["kraus"].empty()) {
    throw InvalidArgument("channel file: 'kraus' must be a non-empty array");
  }
  std::vector<ComplexMatrix> kraus;
  for (std::size_t i = 0; i < doc["kraus"].size(); ++i) {
    kraus.push_back(read_matrix(doc["kraus"][i], d_out, d_in, i));
  }
  return QuantumChannel(std::move(name), d_in, d_out, std::move(kraus), kChannelFileTolerance);
}

QuantumChannel parse_channel(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("channel file: ") + e.what());
  }
  return channel_from_json(doc);
}

QuantumChannel load_channel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open channel file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_channel(buf.str());
}

nlohmann::json channel_to_json(const QuantumChannel& channel) {
  nlohmann::json kraus = nlohmann::json::array();
  for (const auto& k : channel.kraus()) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < k.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < k.cols(); ++c) row.push_back({k(r, c).real(), k(r, c).imag()});
      rows.push_back(std::move(row));
    }
    kraus.push_back(std::move(rows));
  }
  return {{"name", channel.name()},
          {"d_in", channel.d_in()},
          {"d_out", channel.d_out()},
          {"kraus", std::move(kraus)}};
}

}  // namespace qfc
