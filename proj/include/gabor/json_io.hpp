// JSON forms of signals, erasure patterns and recovery reports.
//
//   Signal2D:       {"n": int, "t": int, "re": [...], "im": [...]}  (row-major)
//   ErasurePattern: {"n": int, "t": int, "missing": [[x, y], ...]}  (sorted)
//   RecoveryReport: {"stage": str, "row_status": [str...], "residual": float,
//                    "guarantee_held": bool, "recovered": Signal2D | null, ...}

#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "gabor/channel.hpp"
#include "gabor/recovery.hpp"
#include "gabor/signal.hpp"

namespace gabor {

using Json = nlohmann::ordered_json;

inline Json to_json(const Signal2D& s) {
  Json re = Json::array(), im = Json::array();
  for (const Complex& v : s.values()) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  return Json{{"n", s.n()}, {"t", s.t()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline Signal2D signal_from_json(const Json& j) {
  try {
    const GridDims dims(j.at("n").get<std::size_t>(), j.at("t").get<std::size_t>());
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (re.size() != dims.size() || im.size() != dims.size()) {
      throw std::invalid_argument("signal JSON: expected " + std::to_string(dims.size()) + " entries in re/im");
    }
    std::vector<Complex> values(dims.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = {re[i], im[i]};
    return Signal2D(dims, std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("signal JSON: ") + e.what());
  }
}

inline Json to_json(const ErasurePattern& p) {
  Json missing = Json::array();
  for (const Position& pos : p.missing()) missing.push_back(Json::array({pos.x, pos.y}));
  return Json{{"n", p.dims().n}, {"t", p.dims().t}, {"missing", std::move(missing)}};
}

inline ErasurePattern pattern_from_json(const Json& j) {
  try {
    const GridDims dims(j.at("n").get<std::size_t>(), j.at("t").get<std::size_t>());
    std::vector<Position> missing;
    for (const auto& e : j.at("missing")) {
      if (!e.is_array() || e.size() != 2) throw std::invalid_argument("pattern JSON: entries must be [x, y]");
      missing.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>()});
    }
    return ErasurePattern(dims, std::move(missing));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("pattern JSON: ") + e.what());
  }
}

inline Json to_json(const RecoveryReport& r) {
  Json rows = Json::array(), cols = Json::array(), stages = Json::array();
  for (RowStatus s : r.row_status) rows.push_back(std::string(to_string(s)));
  for (RowStatus s : r.column_status) cols.push_back(std::string(to_string(s)));
  for (bool g : r.stage_guarantees) stages.push_back(g);
  Json j{{"stage", std::string(to_string(r.stage))},
         {"row_status", std::move(rows)},
         {"residual", r.residual},
         {"guarantee_held", r.guarantee_held},
         {"recovered", r.recovered ? to_json(*r.recovered) : Json(nullptr)}};
  if (!r.column_status.empty()) j["column_status"] = std::move(cols);
  j["stage_guarantees"] = std::move(stages);
  return j;
}

}  // namespace gabor
