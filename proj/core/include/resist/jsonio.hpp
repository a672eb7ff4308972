#pragma once

#include "resist/hardfn.hpp"
#include "resist/oracle.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace resist {

// Serializes with every floating-point number printed at 17 significant
// digits; object keys come out sorted, so equal values give equal bytes.
std::string dump17(const nlohmann::json &j, int indent = -1);

std::string fmt17(double v);

inline double ld_to_json(long double v) { return static_cast<double>(v); }

template <Manifold M> nlohmann::json to_json(const M &m, const Bump<M> &b) {
  nlohmann::json j;
  j["kind"] = to_string(b.kind);
  j["anchor_id"] = b.anchor_id;
  j["anchor"] = m.to_json(b.anchor);
  j["R_ball"] = ld_to_json(b.R_ball);
  j["w"] = ld_to_json(b.w);
  j["has_grad"] = b.has_grad;
  if (b.has_grad) {
    j["g"] = m.to_json(b.g);
    j["g_abs"] = ld_to_json(b.g_abs);
    j["p"] = m.to_json(b.p);
    j["R"] = ld_to_json(b.R);
    j["amp"] = ld_to_json(b.amp);
  }
  j["fhat"] = ld_to_json(b.fhat);
  j["f_target"] = ld_to_json(b.f_target);
  return j;
}

template <Manifold M> Bump<M> bump_from_json(const M &m, const nlohmann::json &j) {
  Bump<M> b;
  b.kind = bump_kind_from_string(j.at("kind").get<std::string>());
  b.anchor_id = j.at("anchor_id").get<int>();
  b.anchor = m.point_from_json(j.at("anchor"));
  b.R_ball = j.at("R_ball").get<double>();
  b.w = j.at("w").get<double>();
  b.has_grad = j.at("has_grad").get<bool>();
  if (b.has_grad) {
    b.g = m.tangent_from_json(j.at("g"));
    b.g_abs = j.at("g_abs").get<double>();
    b.p = m.point_from_json(j.at("p"));
    b.R = j.at("R").get<double>();
    b.amp = j.at("amp").get<double>();
  }
  b.fhat = j.at("fhat").get<double>();
  b.f_target = j.at("f_target").get<double>();
  return b;
}

template <Manifold M> nlohmann::json to_json(const M &m, const HardFunction<M> &h) {
  nlohmann::json j;
  j["manifold"] = m.descriptor();
  j["minimizer"] = m.to_json(h.minimizer);
  j["bumps"] = nlohmann::json::array();
  for (const auto &b : h.bumps)
    j["bumps"].push_back(to_json(m, b));
  if (h.ext) {
    j["extension"] = {{"x_ref", m.to_json(h.ext->x_ref)}, {"r", ld_to_json(h.ext->r)}, {"Rcal", ld_to_json(h.ext->Rcal)}};
  }
  return j;
}

template <Manifold M> HardFunction<M> hardfn_from_json(const M &m, const nlohmann::json &j) {
  HardFunction<M> h;
  h.minimizer = m.point_from_json(j.at("minimizer"));
  for (const auto &b : j.at("bumps"))
    h.bumps.push_back(bump_from_json(m, b));
  if (j.contains("extension")) {
    const auto &e = j.at("extension");
    h.ext = Extension<M>{m.point_from_json(e.at("x_ref")), e.at("r").get<double>(), e.at("Rcal").get<double>()};
  }
  return h;
}

template <Manifold M> nlohmann::json to_json(const M &m, const Record<M> &r, std::size_t index) {
  nlohmann::json j;
  j["k"] = index;
  j["x"] = m.to_json(r.x);
  j["f"] = r.f ? nlohmann::json(ld_to_json(*r.f)) : nlohmann::json(nullptr);
  j["g"] = m.to_json(r.g);
  j["R_ball"] = ld_to_json(r.R_ball);
  j["tilde_size"] = r.tilde;
  j["active_before"] = r.active_before;
  j["active_after"] = r.active_after;
  j["tag"] = r.tag;
  j["floor"] = ld_to_json(r.floor);
  j["inner_index"] = r.inner_index;
  j["enclosure_enlarged"] = r.enclosure_enlarged;
  j["source"] = r.source;
  return j;
}

template <Manifold M> Record<M> record_from_json(const M &m, const nlohmann::json &j) {
  Record<M> r;
  r.x = m.point_from_json(j.at("x"));
  if (!j.at("f").is_null())
    r.f = j.at("f").get<double>();
  r.g = m.tangent_from_json(j.at("g"));
  r.R_ball = j.at("R_ball").get<double>();
  r.tilde = j.at("tilde_size").get<int>();
  r.active_before = j.at("active_before").get<int>();
  r.active_after = j.at("active_after").get<int>();
  r.tag = j.at("tag").get<std::string>();
  r.floor = j.at("floor").get<double>();
  r.inner_index = j.at("inner_index").get<int>();
  r.enclosure_enlarged = j.at("enclosure_enlarged").get<bool>();
  r.source = j.at("source").get<std::string>();
  return r;
}

} // namespace resist
