#include <doctest.h>

#include <limits>

#include "cli/io.hpp"
#include "cli/suites.hpp"
#include "gausschan/interferometer.hpp"
#include "support/support.hpp"

using namespace gausschan;
using namespace gausschan::cli;

TEST_SUITE("cli_io") {

TEST_CASE("channel, state and dilation files round-trip bitwise") {
  const auto ch = oracle_channel(2, 4);
  const auto ch2 = channel_from_json(parse_json(dump(channel_to_json(ch)), "mem"));
  CHECK(test::bitwise_equal(ch2.x, ch.x));
  CHECK(test::bitwise_equal(ch2.y, ch.y));
  CHECK(test::bitwise_equal(ch2.w, ch.w));

  const auto st = random_state(SymplecticForm::single(3), 2);
  const auto st2 = state_from_json(parse_json(dump(state_to_json(st)), "mem"));
  CHECK(test::bitwise_equal(st2.mean(), st.mean()));
  CHECK(test::bitwise_equal(st2.cov(), st.cov()));

  const auto dil = random_dilation(1, 2, 3);
  const auto dil2 = dilation_from_json(parse_json(dump(dilation_to_json(dil)), "mem"));
  CHECK(test::bitwise_equal(dil2.g, dil.g));
  CHECK(test::bitwise_equal(dil2.u, dil.u));
  CHECK(dil2.d_env == 2);
}

TEST_CASE("extreme doubles survive the text form") {
  Matrix x(2, 2);
  x << std::numeric_limits<double>::denorm_min(), std::numeric_limits<double>::max(), -0.0, 1.0 / 3.0;
  Matrix y(2, 2);
  y << 0.1, std::nextafter(0.1, 1.0), std::nextafter(0.1, 1.0), std::numeric_limits<double>::min();
  const ChannelParams ch{x, y, Vector::Constant(2, -1e-300), SymplecticForm::single(1)};
  const std::string text = dump(channel_to_json(ch));
  const auto back = channel_from_json(parse_json(text, "mem"));
  CHECK(test::bitwise_equal(back.x, ch.x));
  CHECK(test::bitwise_equal(back.y, ch.y));
  CHECK(test::bitwise_equal(back.w, ch.w));
  CHECK(dump(channel_to_json(back)) == text);
}

TEST_CASE("schema violations are input errors") {
  const json good = channel_to_json(ChannelParams::identity(1));
  auto broken = [&](auto edit) {
    json j = good;
    edit(j);
    return j;
  };
  CHECK_NOTHROW(channel_from_json(good));
  CHECK_THROWS_AS(channel_from_json(broken([](json& j) { j["convention"] = "interleaved"; })), InputError);
  CHECK_THROWS_AS(channel_from_json(broken([](json& j) { j.erase("convention"); })), InputError);
  CHECK_THROWS_AS(channel_from_json(broken([](json& j) { j["d"] = 2; })), InputError);
  CHECK_THROWS_AS(channel_from_json(broken([](json& j) { j["d"] = 0; })), InputError);
  CHECK_THROWS_AS(channel_from_json(broken([](json& j) { j["d"] = 1.5; })), InputError);
  CHECK_THROWS_AS(channel_from_json(broken([](json& j) { j["X"][0][1] = "a"; })), InputError);
  CHECK_THROWS_AS(channel_from_json(broken([](json& j) { j["Y"][0][1] = 1.0; })), InputError);
  CHECK_THROWS_AS(channel_from_json(broken([](json& j) { j["w"] = json::array({0}); })), InputError);
  CHECK_THROWS_AS(channel_from_json(json::array()), InputError);
  CHECK_THROWS_AS(parse_json("{\"d\": 1,", "mem"), InputError);

  json st = state_to_json(vacuum(SymplecticForm::single(1)));
  st["cov"] = matrix_to_json(0.5 * Matrix::Identity(2, 2));
  CHECK_THROWS_AS(state_from_json(st), InputError);
}

TEST_CASE("fnv1a reference values") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("fixture generators") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const int d = 1 + static_cast<int>(s % 3);
    const auto rd = rank_deficient_fixture(d, s);
    CHECK(validity(rd).valid);
    CHECK(pinv_rank_abs(rd.y, 1e-9 * (1 + norm2(rd.y))).rank <= 2 * d - 1);
    CHECK(validity(zero_noise_fixture(d, s)).valid);
    CHECK(trace_condition(passive_oracle_channel(d, s)));
  }
  const auto a = ChannelParams::identity(1);
  const auto b = attenuator(2, 0.3);
  const auto sum = direct_sum(a, b);
  CHECK(sum.modes() == 3);
  CHECK(validity(sum).valid);
  CHECK(env_mode_bound(sum) == 4);
}

}  // TEST_SUITE
