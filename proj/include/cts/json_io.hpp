#pragma once

#include <json.hpp>

#include "cts/catkit.hpp"
#include "cts/cubical.hpp"
#include "cts/hda.hpp"
#include "cts/machine.hpp"
#include "cts/semantics.hpp"
#include "cts/sim.hpp"
#include "cts/spanrep.hpp"

namespace cts::io {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

// Top-level documents carry "schema_version" and "kind". The structural
// to_json overloads return bare bodies; readers accept either form.
json document(const std::string& kind, json body);

json to_json(const CubicalSet& k);
json to_json(const Hda& h);
json to_json(const SyncTable& t);
json to_json(const ReflexiveGraph& g);
json to_json(const PresentedCategory& c);
json to_json(const FinSpan& s);
json to_json(const SpanPseudofunctor& p);

CubicalSet cubical_from_json(const json& j);
Hda hda_from_json(const json& j);
SpanPseudofunctor spans_from_json(const json& j);

json to_json(const cip::Expr& e);
json to_json(const cip::Stat& s);
json to_json(const cip::Term& t);
json to_json(const cip::Program& p, const cip::Typing& t);

json to_json(const cip::Machine& m, const cip::StateSpace& ss);
json to_json(const cip::CipCts& c, const cip::Environment* env = nullptr);
json to_json(const sim::SimRelation& r, const sim::PointedCts& s, const sim::PointedCts& t);

}  // namespace cts::io
