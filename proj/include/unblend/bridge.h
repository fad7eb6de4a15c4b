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


// Line-delimited JSON protocol for talking to a masked-LM service.
//
// The service first writes a handshake line
//   {"hello": {"layers": 13, "dim": 768, "mask": "[MASK]", "cont_marker": "##"}}
// and then answers one request per line, in order:
//   {"id": "1", "op": "tokenize", "tokens": ["some text"]}
//       -> {"id": "1", "pieces": ["some", "text"]}
//   {"id": "2", "op": "mask_topk", "tokens": [...pieces...], "topk": 50}
//       -> {"id": "2", "masks": [[["piece", 0.3], ...], ...]}
//   {"id": "3", "op": "mask_topk", "tokens": [...], "candidates": [[...], ...]}
//       -> {"id": "3", "masks": [[["piece", 0.01], ...], ...]}
//   {"id": "4", "op": "encode_layers", "tokens": [...pieces...]}
//       -> {"id": "4", "layers": [[[0.1, ...], ...], ...]}
// Failures come back as {"id": ..., "error": "message"}. Except for
// tokenize, "tokens" are model pieces; the service adds the sequence
// boundary tokens and leaves them out of its answers.

#ifndef UNBLEND_BRIDGE_H_
#define UNBLEND_BRIDGE_H_

#include <cstdio>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "unblend/mlm.h"

namespace unblend {

// A bidirectional line stream.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual absl::Status WriteLine(absl::string_view line) = 0;
  virtual absl::StatusOr<std::string> ReadLine() = 0;
};

// Runs `command` with /bin/sh and talks to its stdin and stdout. The child
// is reaped on destruction.
absl::StatusOr<std::unique_ptr<LineChannel>> SpawnChannel(
    const std::string& command);

// Connects to a Unix domain stream socket.
absl::StatusOr<std::unique_ptr<LineChannel>> ConnectChannel(
    const std::string& path);

// MlmBackend over a channel. Calls are serialized. Transport and service
// failures are reported as Unavailable.
class BridgeBackend : public MlmBackend {
 public:
  // Reads the handshake.
  static absl::StatusOr<std::unique_ptr<BridgeBackend>> Connect(
      std::unique_ptr<LineChannel> channel);

  const MlmInfo& info() const override { return info_; }
  absl::StatusOr<std::vector<std::string>> Tokenize(
      absl::string_view text) override;
  absl::StatusOr<std::vector<PieceProbs>> MaskTopK(
      const std::vector<std::string>& pieces, int k) override;
  absl::StatusOr<std::vector<std::map<std::string, double>>> MaskProbabilities(
      const std::vector<std::string>& pieces,
      const std::vector<std::vector<std::string>>& candidates) override;
  absl::StatusOr<LayerVectors> EncodeLayers(
      const std::vector<std::string>& pieces) override;

 private:
  explicit BridgeBackend(std::unique_ptr<LineChannel> channel)
      : channel_(std::move(channel)) {}

  // Sends `request` (a JSON object without "id") and returns the response
  // line.
  absl::StatusOr<std::string> Call(std::string request);

  std::unique_ptr<LineChannel> channel_;
  std::mutex mu_;
  long next_id_ = 1;
  MlmInfo info_;
};

// "mock:<fixture.json>" for a FixtureBackend, "unix:<path>" for a socket,
// anything else is a command to spawn.
absl::StatusOr<std::unique_ptr<MlmBackend>> OpenBackend(
    const std::string& address);

// Serves the protocol for `backend`: handshake, then one response per
// request line until end of input. Malformed requests get error responses.
void ServeBackend(MlmBackend& backend, std::istream& in, std::ostream& out);

// One response line for one request line.
std::string HandleRequest(MlmBackend& backend, absl::string_view line);

}  // namespace unblend

#endif  // UNBLEND_BRIDGE_H_
