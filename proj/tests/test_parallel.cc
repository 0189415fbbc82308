#include <doctest.h>

#include <random>

#include "cts/cip_random.hpp"
#include "cts/json_io.hpp"

using namespace cts;
using cts::io::json;

namespace {

sim::PointedHda random_hda(std::mt19937_64& rng) { return sim::random_pointed_hda(rng, 5, {"a", "b"}); }

cip::Machine machine(const std::string& text, int n) {
  return cip::Machine(cip::typecheck(cip::parse_program(text)), cip::Interp{n});
}

}  // namespace

TEST_CASE("kernel: parallel and serial agree on random carriers") {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 30; ++round) {
    auto p = random_hda(rng);
    const CubicalSet& k = p.hda.carrier;
    for (int n = 1; n <= 2; ++n) CHECK(cubical_kernel(k, n) == cubical_kernel_serial(k, n));
    KernelOptions serial;
    serial.parallel = false;
    CHECK(cubical_kernel(k, 2, KernelOptions{}) == cubical_kernel(k, 2, serial));
  }
}

TEST_CASE("coskeleton: parallel and serial agree") {
  std::mt19937_64 rng(43);
  for (int round = 0; round < 20; ++round) {
    auto p = random_hda(rng);
    Hda one = hda_of_graph(hda_tr1(p.hda));
    CHECK(io::to_json(sigma_coskeleton(one, 1, 3, true)) == io::to_json(sigma_coskeleton(one, 1, 3, false)));
  }
}

TEST_CASE("explore: parallel and serial give the same document") {
  std::mt19937_64 rng(47);
  int checked = 0;
  for (int round = 0; round < 20; ++round) {
    std::string text = cip::random_pair_program(rng, 2);
    cip::Machine m = [&] {
      try {
        return machine(text, 3);
      } catch (const cip::Error&) {
        return machine("context x:nat; program x := 1 end", 3);
      }
    }();
    CHECK(io::to_json(m, cip::explore(m)) == io::to_json(m, cip::explore_serial(m)));
    ++checked;
  }
  CHECK(checked == 20);
}

TEST_CASE("json: cubical and hda round trips") {
  std::mt19937_64 rng(53);
  for (int round = 0; round < 20; ++round) {
    auto p = random_hda(rng);
    json h = io::to_json(p.hda);
    CHECK(io::to_json(io::hda_from_json(h)) == h);
    CHECK(io::to_json(io::hda_from_json(io::document("hda", h))) == h);
    json c = io::to_json(p.hda.carrier);
    CHECK(io::to_json(io::cubical_from_json(c)) == c);
    CHECK(validate(io::cubical_from_json(c)).empty());
  }
}

TEST_CASE("json: span pseudofunctor round trip") {
  std::mt19937_64 rng(59);
  for (int round = 0; round < 20; ++round) {
    auto control = free_category(random_control(rng, 4, 5));
    auto p = random_span_pseudofunctor(rng, control, 3, 2);
    json j = io::to_json(p);
    json doc = io::document("spans", j);
    CHECK(doc.at("schema_version") == io::kSchemaVersion);
    auto q = io::spans_from_json(doc);
    CHECK(validate(q).empty());
    CHECK(io::to_json(q) == j);
    CHECK(isomorphism(p, q).has_value());
  }
}

TEST_CASE("json: malformed documents are rejected") {
  CHECK_THROWS(io::hda_from_json(json::parse(R"({"schema_version": 1, "kind": "hda"})")));
  json later = io::document("cubical_set", io::to_json(CubicalSet(0)));
  later["schema_version"] = io::kSchemaVersion + 1;
  CHECK_THROWS_AS(io::cubical_from_json(later), std::invalid_argument);
}
