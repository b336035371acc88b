#pragma once

#include <string>

#include <json.hpp>

#include "qdflow/bessel.hpp"
#include "qdflow/motherbody.hpp"
#include "qdflow/render.hpp"
#include "qdflow/trace.hpp"

namespace qdflow {

using json = nlohmann::ordered_json;

inline json to_json(C z) { return json::array({z.real(), z.imag()}); }

inline C complex_from_json(const json& j) {
    return C(j.at(0).get<double>(), j.at(1).get<double>());
}

inline json endpoint_to_json(const Endpoint& e) {
    json j;
    j["class"] = to_string(e.kind);
    switch (e.kind) {
        case Endpoint::Kind::hits_zero:
            j["zero"] = to_json(e.zero);
            j["distance"] = e.distance;
            break;
        case Endpoint::Kind::to_origin:
            j["direction"] = e.origin_angle;
            break;
        case Endpoint::Kind::to_infinity:
            j["form"] = to_string(e.form);
            break;
        case Endpoint::Kind::truncated:
            j["note"] = e.note;
            break;
        default:
            break;
    }
    return j;
}

inline json trajectory_to_json(const TrajectoryPath& t) {
    json j;
    j["kind"] = to_string(t.kind);
    j["launch"] = {{"origin", to_json(t.launch.origin)},
                   {"angle", t.launch.angle},
                   {"from_zero", t.launch.from_zero}};
    j["endpoint"] = endpoint_to_json(t.endpoint);
    j["arc_length"] = t.arc_length;
    j["short_member"] = t.short_member;
    json pts = json::array();
    for (const C& p : t.path.points) pts.push_back(to_json(p));
    j["points"] = std::move(pts);
    return j;
}

inline json gate_to_json(const GateValues& v, const ShortTrajectoryGate& g) {
    return {{"v_plus", to_json(v.v_plus)},
            {"v_minus", to_json(v.v_minus)},
            {"exists", g.exists},
            {"branch", to_string(g.branch)}};
}

// Square window covering the zeros, the pole and every short trajectory.
inline Viewport graph_viewport(const CriticalGraph& g, const std::vector<C>& extra = {}) {
    std::vector<C> pts{C(0.0), g.qd.a(), g.qd.b()};
    for (const auto& st : g.short_trajectories)
        pts.insert(pts.end(), st.path.path.points.begin(), st.path.path.points.end());
    pts.insert(pts.end(), extra.begin(), extra.end());
    double xmin = pts[0].real(), xmax = xmin, ymin = pts[0].imag(), ymax = ymin;
    for (const C& p : pts) {
        xmin = std::min(xmin, p.real());
        xmax = std::max(xmax, p.real());
        ymin = std::min(ymin, p.imag());
        ymax = std::max(ymax, p.imag());
    }
    const C center(0.5 * (xmin + xmax), 0.5 * (ymin + ymax));
    double half = 0.5 * std::max(xmax - xmin, ymax - ymin);
    if (!(half > 0.0)) half = 1.0;
    return {center, 1.35 * half};
}

inline json graph_document(const CriticalGraph& g) {
    json doc;
    doc["schema"] = "qdflow/1";
    doc["params"] = {{"lambda", to_json(g.qd.lambda())},
                     {"a", to_json(g.qd.a())},
                     {"b", to_json(g.qd.b())}};
    doc["gate"] = gate_to_json(g.gate, g.gate_decision);
    json trajs = json::array();
    for (const auto& t : g.trajectories) trajs.push_back(trajectory_to_json(t));
    doc["trajectories"] = std::move(trajs);
    json shorts = json::array();
    for (const auto& st : g.short_trajectories) {
        json s;
        s["from"] = to_json(st.from);
        s["to"] = to_json(st.to);
        s["mutual_gap"] = st.mutual_gap;
        json pts = json::array();
        for (const C& p : st.path.path.points) pts.push_back(to_json(p));
        s["points"] = std::move(pts);
        shorts.push_back(std::move(s));
    }
    doc["short_trajectories"] = std::move(shorts);
    const Viewport vp = graph_viewport(g);
    doc["view"] = {{"center", to_json(vp.center)}, {"half_width", vp.half_width}};
    return doc;
}

// Scene rebuilt purely from the document, so rendering a reloaded JSON file
// reproduces the SVG byte for byte.
inline Scene scene_from_graph_json(const json& doc) {
    Scene scene;
    scene.viewport = Viewport{complex_from_json(doc.at("view").at("center")),
                              doc.at("view").at("half_width").get<double>()};
    for (const auto& t : doc.at("trajectories")) {
        if (t.at("short_member").get<bool>()) continue; // drawn via short_trajectories
        Path p;
        for (const auto& q : t.at("points")) p.points.push_back(complex_from_json(q));
        scene.curves.emplace_back(std::move(p), CurveStyle::critical);
    }
    for (const auto& st : doc.at("short_trajectories")) {
        Path p;
        for (const auto& q : st.at("points")) p.points.push_back(complex_from_json(q));
        scene.curves.emplace_back(std::move(p), CurveStyle::short_trajectory);
    }
    scene.markers.emplace_back(complex_from_json(doc.at("params").at("a")), MarkerKind::zero);
    scene.markers.emplace_back(complex_from_json(doc.at("params").at("b")), MarkerKind::zero);
    scene.markers.emplace_back(C(0.0), MarkerKind::pole);
    if (doc.contains("overlay"))
        for (const auto& z : doc.at("overlay").at("zeros"))
            scene.markers.emplace_back(complex_from_json(z), MarkerKind::overlay_zero);
    return scene;
}

} // namespace qdflow
