// Copyright 2026 The Unblend Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "unblend/bridge.h"

#include <deque>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/match.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "support.h"

namespace unblend {
namespace {

using ::nlohmann::json;
using ::testing::ElementsAre;
using ::testing::HasSubstr;

// Serves requests in process, one response per written line.
class LoopbackChannel : public LineChannel {
 public:
  explicit LoopbackChannel(MlmBackend* backend) : backend_(backend) {
    std::istringstream in;
    std::ostringstream out;
    ServeBackend(*backend_, in, out);
    std::string hello = out.str();
    hello.pop_back();
    lines_.push_back(hello);
  }

  absl::Status WriteLine(absl::string_view line) override {
    written.emplace_back(line);
    lines_.push_back(HandleRequest(*backend_, line));
    return absl::OkStatus();
  }

  absl::StatusOr<std::string> ReadLine() override {
    if (lines_.empty()) return absl::UnavailableError("closed");
    std::string line = std::move(lines_.front());
    lines_.pop_front();
    return line;
  }

  std::vector<std::string> written;

 private:
  MlmBackend* backend_;
  std::deque<std::string> lines_;
};

// Replays canned lines regardless of what is written.
class CannedChannel : public LineChannel {
 public:
  explicit CannedChannel(std::vector<std::string> lines)
      : lines_(lines.begin(), lines.end()) {}

  absl::Status WriteLine(absl::string_view) override {
    return absl::OkStatus();
  }
  absl::StatusOr<std::string> ReadLine() override {
    if (lines_.empty()) return absl::UnavailableError("closed");
    std::string line = std::move(lines_.front());
    lines_.pop_front();
    return line;
  }

 private:
  std::deque<std::string> lines_;
};

constexpr char kHello[] =
    R"({"hello": {"layers": 2, "dim": 1, "mask": "[M]", "cont_marker": "@@"}})";

TEST(BridgeTest, HandshakeSetsInfo) {
  absl::StatusOr<std::unique_ptr<BridgeBackend>> b = BridgeBackend::Connect(
      std::make_unique<CannedChannel>(std::vector<std::string>{kHello}));
  ASSERT_TRUE(b.ok()) << b.status();
  EXPECT_EQ((*b)->info().layers, 2);
  EXPECT_EQ((*b)->info().dim, 1);
  EXPECT_EQ((*b)->info().mask, "[M]");
  EXPECT_EQ((*b)->info().cont_marker, "@@");
}

TEST(BridgeTest, BadHandshakesFail) {
  for (const std::string& hello :
       {std::string("not json"), std::string(R"({"error": "no GPU"})"),
        std::string(R"({"hello": {"dim": 4}})"),
        std::string(R"({"hello": {"layers": 0, "dim": 4}})")}) {
    absl::StatusOr<std::unique_ptr<BridgeBackend>> b = BridgeBackend::Connect(
        std::make_unique<CannedChannel>(std::vector<std::string>{hello}));
    EXPECT_EQ(b.status().code(), absl::StatusCode::kUnavailable) << hello;
  }
}

TEST(BridgeTest, LoopbackMatchesBackend) {
  testing::HashBackend direct;
  testing::HashBackend served;
  auto channel = std::make_unique<LoopbackChannel>(&served);
  LoopbackChannel* raw = channel.get();
  absl::StatusOr<std::unique_ptr<BridgeBackend>> b =
      BridgeBackend::Connect(std::move(channel));
  ASSERT_TRUE(b.ok()) << b.status();
  BridgeBackend& bridge = **b;
  EXPECT_EQ(bridge.info().layers, direct.info().layers);

  const std::string text = "a shoptics store";
  EXPECT_EQ(*bridge.Tokenize(text), *direct.Tokenize(text));

  const std::vector<std::string> pieces = {"a", "[MASK]", "st", "[MASK]"};
  const std::vector<std::vector<std::string>> candidates = {{"sh", "op"},
                                                            {"xy"}};
  EXPECT_EQ(*bridge.MaskProbabilities(pieces, candidates),
            *direct.MaskProbabilities(pieces, candidates));
  EXPECT_EQ(*bridge.MaskTopK(pieces, 2), *direct.MaskTopK(pieces, 2));
  EXPECT_EQ(*bridge.EncodeLayers(pieces), *direct.EncodeLayers(pieces));

  // Ids count up from 1 and every request is one JSON object.
  ASSERT_EQ(raw->written.size(), 4u);
  for (size_t i = 0; i < raw->written.size(); ++i) {
    const json request = json::parse(raw->written[i]);
    EXPECT_EQ(request.at("id").get<std::string>(), std::to_string(i + 1));
  }
  EXPECT_EQ(json::parse(raw->written[0]).at("op").get<std::string>(),
            "tokenize");
  EXPECT_TRUE(json::parse(raw->written[1]).contains("candidates"));
  EXPECT_EQ(json::parse(raw->written[2]).at("topk").get<int>(), 2);
}

TEST(BridgeTest, ResponseProblemsAreUnavailable) {
  const std::vector<std::string> bad = {
      R"({"id": "7", "pieces": ["x"]})",
      R"({"id": "1", "error": "model exploded"})",
      R"({"id": "1", "masks": [[["x", 1.5]]]})",
      R"({"id": "1", "masks": [[["x", 0.5]], [["y", 0.5]]]})",
      "garbage",
  };
  for (const std::string& line : bad) {
    absl::StatusOr<std::unique_ptr<BridgeBackend>> b =
        BridgeBackend::Connect(std::make_unique<CannedChannel>(
            std::vector<std::string>{kHello, line}));
    ASSERT_TRUE(b.ok());
    absl::StatusOr<std::vector<std::map<std::string, double>>> r =
        (*b)->MaskProbabilities({"[M]"}, {{"x"}});
    EXPECT_EQ(r.status().code(), absl::StatusCode::kUnavailable) << line;
  }
  absl::StatusOr<std::unique_ptr<BridgeBackend>> b = BridgeBackend::Connect(
      std::make_unique<CannedChannel>(std::vector<std::string>{
          kHello, R"({"id": "1", "error": "model exploded"})"}));
  ASSERT_TRUE(b.ok());
  EXPECT_THAT(std::string((*b)->Tokenize("x").status().message()),
              HasSubstr("model exploded"));
}

TEST(BridgeTest, EncodeLayersShapeIsChecked) {
  const std::vector<std::string> bad = {
      R"({"id": "1", "layers": [[[0.5]]]})",
      R"({"id": "1", "layers": [[[0.5]], [[0.5], [0.5]]]})",
      R"({"id": "1", "layers": [[[0.5, 1]], [[0.5, 1]]]})",
  };
  for (const std::string& line : bad) {
    absl::StatusOr<std::unique_ptr<BridgeBackend>> b =
        BridgeBackend::Connect(std::make_unique<CannedChannel>(
            std::vector<std::string>{kHello, line}));
    ASSERT_TRUE(b.ok());
    EXPECT_EQ((*b)->EncodeLayers({"x"}).status().code(),
              absl::StatusCode::kUnavailable)
        << line;
  }
}

TEST(HandleRequestTest, ErrorsEchoTheId) {
  testing::HashBackend backend;
  const json unknown = json::parse(
      HandleRequest(backend, R"({"id": "9", "op": "sing", "tokens": []})"));
  EXPECT_EQ(unknown.at("id").get<std::string>(), "9");
  EXPECT_TRUE(unknown.contains("error"));

  const json no_mask = json::parse(HandleRequest(
      backend, R"({"id": "3", "op": "mask_topk", "tokens": ["a"]})"));
  EXPECT_EQ(no_mask.at("id").get<std::string>(), "3");
  EXPECT_TRUE(no_mask.contains("error"));

  EXPECT_TRUE(json::parse(HandleRequest(backend, "[1, 2]")).contains("error"));
  EXPECT_TRUE(json::parse(HandleRequest(backend, R"({"op": "tokenize"})"))
                  .contains("error"));
}

TEST(ServeBackendTest, AnswersInOrder) {
  absl::StatusOr<std::unique_ptr<FixtureBackend>> fixture =
      FixtureBackend::Load(testing::TestDataPath("mock_backend.json"));
  ASSERT_TRUE(fixture.ok()) << fixture.status();
  std::istringstream in(
      "{\"id\": \"a\", \"op\": \"tokenize\", \"tokens\": [\"segmenting\"]}\n"
      "\n"
      "{\"id\": \"b\", \"op\": \"encode_layers\", \"tokens\": [\"shop\"]}\n");
  std::ostringstream out;
  ServeBackend(**fixture, in, out);
  std::istringstream lines(out.str());
  std::string hello, first, second, extra;
  ASSERT_TRUE(std::getline(lines, hello));
  ASSERT_TRUE(std::getline(lines, first));
  ASSERT_TRUE(std::getline(lines, second));
  EXPECT_FALSE(std::getline(lines, extra));
  EXPECT_EQ(json::parse(hello).at("hello").at("layers").get<int>(), 3);
  EXPECT_EQ(json::parse(first).at("pieces").get<std::vector<std::string>>(),
            (std::vector<std::string>{"segment", "##ing"}));
  EXPECT_EQ(json::parse(second).at("id").get<std::string>(), "b");
  EXPECT_EQ(json::parse(second).at("layers").size(), 3u);
}

TEST(SpawnChannelTest, TalksToServeMockProcess) {
  const std::string command =
      std::string(UNBLEND_CLI_PATH) + " serve-mock --fixture " +
      testing::TestDataPath("mock_backend.json");
  absl::StatusOr<std::unique_ptr<MlmBackend>> backend = OpenBackend(command);
  ASSERT_TRUE(backend.ok()) << backend.status();
  EXPECT_EQ((*backend)->info().layers, 3);
  absl::StatusOr<std::vector<std::string>> pieces =
      (*backend)->Tokenize("segmenting");
  ASSERT_TRUE(pieces.ok()) << pieces.status();
  EXPECT_THAT(*pieces, ElementsAre("segment", "##ing"));
  absl::StatusOr<std::vector<std::map<std::string, double>>> probs =
      (*backend)->MaskProbabilities({"[MASK]", "[MASK]"},
                                    {{"shop", "hate"}, {"optics"}});
  ASSERT_TRUE(probs.ok()) << probs.status();
  EXPECT_DOUBLE_EQ((*probs)[0].at("shop"), 0.4);
  EXPECT_DOUBLE_EQ((*probs)[1].at("optics"), 0.5);
}

TEST(SpawnChannelTest, DeadProcessIsUnavailable) {
  EXPECT_EQ(OpenBackend("exit 0").status().code(),
            absl::StatusCode::kUnavailable);
  EXPECT_FALSE(ConnectChannel("/nonexistent/socket").ok());
}

}  // namespace
}  // namespace unblend
