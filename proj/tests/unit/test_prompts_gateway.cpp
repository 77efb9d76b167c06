#include <gtest/gtest.h>

#include <thread>
#include <vector>

#include "fixtures.hpp"
#include "hypgame/gateway.hpp"
#include "hypgame/prompts.hpp"

using namespace hypgame;

namespace {

GatewayResponse text(std::string t) { return {std::move(t), false, std::nullopt}; }

GatewayRequest rq(std::string role, std::string user) { return {std::move(role), std::move(user), 0.0, std::nullopt}; }

}  // namespace

TEST(Prompts, RenderSubstitutesAndRejectsUnknown) {
  EXPECT_EQ(render_template("Hi {{name}}, {{name}}!", {{"name", "Ada"}}), "Hi Ada, Ada!");
  EXPECT_THROW(render_template("{{missing}}", {}), Error);
}

TEST(Prompts, ParseSections) {
  const auto t = parse_prompt_file("x", "### system\nbe terse\n### user\nask {{q}}\n");
  EXPECT_EQ(t.name, "x");
  EXPECT_NE(t.role.find("be terse"), std::string::npos);
  EXPECT_NE(t.user.find("ask {{q}}"), std::string::npos);
  EXPECT_EQ(t.role.find("ask"), std::string::npos);
}

TEST(Prompts, BuiltinLibraryHasEveryTemplate) {
  const auto lib = PromptLibrary::builtin();
  for (auto name : {prompt_names::diagnose, prompt_names::move_selection, prompt_names::retrieve_evidence,
                    prompt_names::speculate_evidence, prompt_names::expand, prompt_names::prune,
                    prompt_names::debate_setup, prompt_names::claimsmith, prompt_names::debate_conclude,
                    prompt_names::judge_error_removal, prompt_names::judge_pathway_recall, prompt_names::zero_shot,
                    prompt_names::chain_of_thought, prompt_names::react, prompt_names::task_reconstruction,
                    prompt_names::task_corruption}) {
    EXPECT_TRUE(lib.contains(name)) << name;
  }
  EXPECT_THROW(lib.get("nope"), Error);
}

TEST(Prompts, DirectoryOverridesBuiltin) {
  fixtures::TempDir tmp("prompts");
  {
    std::ofstream out(tmp.path() / "zero_shot.txt");
    out << "### system\ncustom role\n### user\n{{task}}\n";
  }
  const auto lib = PromptLibrary::load_dir(tmp.path());
  EXPECT_NE(lib.get("zero_shot").role.find("custom role"), std::string::npos);
  EXPECT_TRUE(lib.contains(prompt_names::diagnose));
}

TEST(Mock, ExactThenRulesThenDefault) {
  MockGateway gw;
  gw.on("role", "user", std::vector<MockGateway::Reply>{text("one"), text("two")});
  gw.when("ro", "", {text("rule")});
  gw.otherwise({text("fallback")});
  EXPECT_EQ(gw.complete(rq("role", "user")).text, "one");
  EXPECT_EQ(gw.complete(rq("role", "user")).text, "two");
  EXPECT_EQ(gw.complete(rq("role", "user")).text, "two");
  EXPECT_EQ(gw.complete(rq("roles", "other")).text, "rule");
  EXPECT_EQ(gw.complete(rq("x", "y")).text, "fallback");
  EXPECT_EQ(gw.call_count(), 5u);
  EXPECT_EQ(gw.calls()[3].user_prompt, "other");
}

TEST(Mock, UnscriptedRequestFails) {
  MockGateway gw;
  try {
    gw.complete(rq("r", "u"));
    FAIL();
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.failure(), GatewayFailure::no_script);
    EXPECT_FALSE(e.retriable());
  }
}

TEST(Mock, FromJsonDocument) {
  const auto gw = MockGateway::from_json(nlohmann::json::parse(R"({
    "exact": [{"role_prompt": "r", "user_prompt": "u", "responses": ["exact"]}],
    "rules": [{"role_contains": "judge", "responses": [{"text": "", "refusal": true}]},
              {"user_contains": "boom", "responses": [{"error": "timeout"}]}],
    "default": ["d"]})"));
  EXPECT_EQ(gw->complete(rq("r", "u")).text, "exact");
  EXPECT_TRUE(gw->complete(rq("a judge", "x")).refusal);
  EXPECT_THROW(gw->complete(rq("a", "boom")), GatewayError);
  EXPECT_EQ(gw->complete(rq("a", "b")).text, "d");
  EXPECT_NO_THROW(MockGateway::from_json(fixtures::mock_gateway_doc()));
}

TEST(Retry, RetriesOnlyRetriableFailures) {
  MockGateway flaky;
  flaky.when("", "", {GatewayError(GatewayFailure::transport, "reset"), text("ok")});
  EXPECT_EQ(complete_with_retry(flaky, rq("r", "u")).text, "ok");
  EXPECT_EQ(flaky.call_count(), 2u);

  MockGateway broken;
  broken.when("", "", {GatewayError(GatewayFailure::protocol, "garbage"), text("ok")});
  EXPECT_THROW(complete_with_retry(broken, rq("r", "u")), GatewayError);
  EXPECT_EQ(broken.call_count(), 1u);
}

TEST(Mock, ConcurrentCallsAreCounted) {
  MockGateway gw;
  gw.otherwise({text("x")});
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < 50; ++i) gw.complete(rq("r", "u"));
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(gw.call_count(), 400u);
}

TEST(Http, FromEnvWithoutConfigurationFails) {
  unsetenv("HYPGAME_GATEWAY_URL");
  try {
    HttpGateway::from_env();
    FAIL();
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.failure(), GatewayFailure::not_configured);
  }
}

TEST(Http, UnreachableEndpointIsRetriableTransportError) {
  HttpGateway gw({"http://127.0.0.1:9/v1", "", std::chrono::seconds(2)});
  try {
    gw.complete(rq("r", "u"));
    FAIL();
  } catch (const GatewayError& e) {
    EXPECT_TRUE(e.retriable());
  }
}
