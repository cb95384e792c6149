#pragma once
// Canonical JSON serialization of networks.
//
// A coefficient is stored as a plain JSON number exactly when its long double
// value survives a round trip through double; otherwise it is stored as a C99
// hexfloat string ("%La"), which strtold parses back bit-identically.  This
// keeps files human-readable at standard precision while making round trips
// lossless for every representable coefficient.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "signet/network.hpp"

namespace signet {

using json = nlohmann::ordered_json;

inline json encode_ld(ld v) {
  const double dv = static_cast<double>(v);
  if (static_cast<ld>(dv) == v && std::isfinite(dv)) return dv;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%La", v);
  return std::string(buf);
}

inline ld decode_ld(const json& j) {
  if (j.is_string()) return std::strtold(j.get<std::string>().c_str(), nullptr);
  return static_cast<ld>(j.get<double>());
}

inline json mat_to_json(const Mat& m) {
  json coeffs = json::array();
  for (ld v : m.a) coeffs.push_back(encode_ld(v));
  return json{{"rows", m.rows}, {"cols", m.cols}, {"coeffs", std::move(coeffs)}};
}

inline Mat mat_from_json(const json& j) {
  Mat m(j.at("rows").get<int>(), j.at("cols").get<int>());
  const json& coeffs = j.at("coeffs");
  if (coeffs.size() != m.a.size()) throw std::runtime_error("coeff count mismatch");
  for (size_t i = 0; i < m.a.size(); ++i) m.a[i] = decode_ld(coeffs[i]);
  return m;
}

inline json to_json(const Network& net) {
  json j;
  j["input_dim"] = net.input_dim;
  j["widths"] = net.hidden_widths();
  j["layers"] = json::array();
  for (const auto& m : net.layers) j["layers"].push_back(mat_to_json(m));
  json params = json::object();
  for (const auto& [k, v] : net.params) params[k] = encode_ld(v);
  json taps = json::object();
  for (const auto& [name, tap] : net.taps)
    taps[name] = json{{"layer", tap.layer}, {"map", mat_to_json(tap.map)}};
  j["meta"] = json{{"builder", net.builder},
                   {"params", std::move(params)},
                   {"flags", net.flags},
                   {"claimed_depth", net.claimed_depth},
                   {"claimed_width", net.claimed_width},
                   {"taps", std::move(taps)}};
  return j;
}

inline Network from_json(const json& j) {
  Network net;
  net.input_dim = j.at("input_dim").get<int>();
  for (const auto& lm : j.at("layers")) net.layers.push_back(mat_from_json(lm));
  const json& meta = j.at("meta");
  net.builder = meta.at("builder").get<std::string>();
  for (const auto& [k, v] : meta.at("params").items()) net.params[k] = decode_ld(v);
  net.flags = meta.at("flags").get<std::vector<std::string>>();
  net.claimed_depth = meta.at("claimed_depth").get<long long>();
  net.claimed_width = meta.at("claimed_width").get<long long>();
  for (const auto& [name, tj] : meta.at("taps").items()) {
    AffineTap t;
    t.layer = tj.at("layer").get<int>();
    t.map = mat_from_json(tj.at("map"));
    net.taps[name] = std::move(t);
  }
  net.check();
  return net;
}

inline void save_network(const Network& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << to_json(net).dump(1) << "\n";
}

inline Network load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return from_json(j);
}

}  // namespace signet
