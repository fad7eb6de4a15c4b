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

#include <fcntl.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/un.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/strip.h"
#include "json.hpp"

namespace unblend {
namespace {

using json = nlohmann::json;

absl::Status Errno(absl::string_view what) {
  return absl::UnavailableError(absl::StrCat(what, ": ", std::strerror(errno)));
}

// Buffered line I/O over a pair of file descriptors.
class FdChannel : public LineChannel {
 public:
  FdChannel(int read_fd, int write_fd, pid_t child)
      : read_fd_(read_fd), write_fd_(write_fd), child_(child) {}

  ~FdChannel() override {
    if (write_fd_ != read_fd_ && write_fd_ >= 0) close(write_fd_);
    if (read_fd_ >= 0) close(read_fd_);
    if (child_ > 0) {
      int status;
      waitpid(child_, &status, 0);
    }
  }

  absl::Status WriteLine(absl::string_view line) override {
    std::string data(line);
    data.push_back('\n');
    size_t done = 0;
    while (done < data.size()) {
      const ssize_t n = write(write_fd_, data.data() + done, data.size() - done);
      if (n < 0) {
        if (errno == EINTR) continue;
        return Errno("bridge write failed");
      }
      done += static_cast<size_t>(n);
    }
    return absl::OkStatus();
  }

  absl::StatusOr<std::string> ReadLine() override {
    while (true) {
      const size_t newline = buffer_.find('\n');
      if (newline != std::string::npos) {
        std::string line = buffer_.substr(0, newline);
        buffer_.erase(0, newline + 1);
        return line;
      }
      char chunk[65536];
      const ssize_t n = read(read_fd_, chunk, sizeof(chunk));
      if (n < 0) {
        if (errno == EINTR) continue;
        return Errno("bridge read failed");
      }
      if (n == 0) return absl::UnavailableError("bridge closed the connection");
      buffer_.append(chunk, static_cast<size_t>(n));
    }
  }

 private:
  int read_fd_;
  int write_fd_;
  pid_t child_;
  std::string buffer_;
};

absl::StatusOr<json> ParseResponse(absl::string_view line,
                                   absl::string_view id) {
  json response = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (response.is_discarded() || !response.is_object()) {
    return absl::UnavailableError("bridge sent malformed JSON");
  }
  auto it = response.find("id");
  if (it == response.end() || !it->is_string() ||
      it->get<std::string>() != id) {
    return absl::UnavailableError(
        absl::StrCat("bridge response does not echo request id ", id));
  }
  if (auto error = response.find("error");
      error != response.end() && !error->is_null()) {
    return absl::UnavailableError(absl::StrCat(
        "bridge error: ", error->is_string() ? error->get<std::string>()
                                             : error->dump()));
  }
  return response;
}

absl::StatusOr<std::vector<PieceProbs>> ParseMasks(const json& response) {
  try {
    std::vector<PieceProbs> out;
    for (const json& mask : response.at("masks")) {
      PieceProbs probs;
      for (const json& entry : mask) {
        const double p = entry.at(1).get<double>();
        if (!(p >= 0 && p <= 1)) {
          return absl::UnavailableError("bridge probability outside [0, 1]");
        }
        probs.emplace_back(entry.at(0).get<std::string>(), p);
      }
      out.push_back(std::move(probs));
    }
    return out;
  } catch (const json::exception& e) {
    return absl::UnavailableError(
        absl::StrCat("malformed mask response: ", e.what()));
  }
}

json ErrorResponse(const json& id, absl::string_view message) {
  json out;
  out["id"] = id;
  out["error"] = std::string(message);
  return out;
}

}  // namespace

absl::StatusOr<std::unique_ptr<LineChannel>> SpawnChannel(
    const std::string& command) {
  int to_child[2], from_child[2];
  if (pipe(to_child) != 0) return Errno("pipe");
  if (pipe(from_child) != 0) {
    close(to_child[0]);
    close(to_child[1]);
    return Errno("pipe");
  }
  // A dead bridge should surface as a write error, not kill us.
  signal(SIGPIPE, SIG_IGN);
  const pid_t pid = fork();
  if (pid < 0) return Errno("fork");
  if (pid == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);
  fcntl(to_child[1], F_SETFD, FD_CLOEXEC);
  fcntl(from_child[0], F_SETFD, FD_CLOEXEC);
  return std::unique_ptr<LineChannel>(
      new FdChannel(from_child[0], to_child[1], pid));
}

absl::StatusOr<std::unique_ptr<LineChannel>> ConnectChannel(
    const std::string& path) {
  sockaddr_un addr{};
  addr.sun_family = AF_UNIX;
  if (path.size() >= sizeof(addr.sun_path)) {
    return absl::InvalidArgumentError(
        absl::StrCat("socket path too long: ", path));
  }
  std::memcpy(addr.sun_path, path.c_str(), path.size() + 1);
  const int fd = socket(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) return Errno("socket");
  if (connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    absl::Status status = Errno(absl::StrCat("connect ", path));
    close(fd);
    return status;
  }
  signal(SIGPIPE, SIG_IGN);
  return std::unique_ptr<LineChannel>(new FdChannel(fd, fd, -1));
}

absl::StatusOr<std::unique_ptr<BridgeBackend>> BridgeBackend::Connect(
    std::unique_ptr<LineChannel> channel) {
  std::unique_ptr<BridgeBackend> backend(new BridgeBackend(std::move(channel)));
  absl::StatusOr<std::string> line = backend->channel_->ReadLine();
  if (!line.ok()) return line.status();
  const json hello = json::parse(*line, nullptr, /*allow_exceptions=*/false);
  if (hello.is_discarded() || !hello.is_object()) {
    return absl::UnavailableError("bridge handshake is not JSON");
  }
  if (hello.contains("error")) {
    return absl::UnavailableError(
        absl::StrCat("bridge failed to start: ", hello["error"].dump()));
  }
  try {
    const json& h = hello.at("hello");
    backend->info_.layers = h.at("layers").get<int>();
    backend->info_.dim = h.at("dim").get<int>();
    backend->info_.mask = h.value("mask", "[MASK]");
    backend->info_.cont_marker = h.value("cont_marker", "##");
  } catch (const json::exception& e) {
    return absl::UnavailableError(
        absl::StrCat("malformed bridge handshake: ", e.what()));
  }
  if (backend->info_.layers < 1 || backend->info_.dim < 1) {
    return absl::UnavailableError("bridge announced no layers");
  }
  return backend;
}

absl::StatusOr<std::string> BridgeBackend::Call(std::string request) {
  std::lock_guard<std::mutex> lock(mu_);
  const std::string id = absl::StrCat(next_id_++);
  // Requests are built as objects without "id"; splice it in front.
  request = absl::StrCat("{\"id\":\"", id, "\",", request.substr(1));
  if (absl::Status s = channel_->WriteLine(request); !s.ok()) return s;
  absl::StatusOr<std::string> line = channel_->ReadLine();
  if (!line.ok()) return line.status();
  absl::StatusOr<json> response = ParseResponse(*line, id);
  if (!response.ok()) return response.status();
  return *line;
}

absl::StatusOr<std::vector<std::string>> BridgeBackend::Tokenize(
    absl::string_view text) {
  json request;
  request["op"] = "tokenize";
  request["tokens"] = {std::string(text)};
  absl::StatusOr<std::string> line = Call(request.dump());
  if (!line.ok()) return line.status();
  try {
    return json::parse(*line).at("pieces").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    return absl::UnavailableError(
        absl::StrCat("malformed tokenize response: ", e.what()));
  }
}

absl::StatusOr<std::vector<PieceProbs>> BridgeBackend::MaskTopK(
    const std::vector<std::string>& pieces, int k) {
  json request;
  request["op"] = "mask_topk";
  request["tokens"] = pieces;
  request["topk"] = k;
  absl::StatusOr<std::string> line = Call(request.dump());
  if (!line.ok()) return line.status();
  return ParseMasks(json::parse(*line));
}

absl::StatusOr<std::vector<std::map<std::string, double>>>
BridgeBackend::MaskProbabilities(
    const std::vector<std::string>& pieces,
    const std::vector<std::vector<std::string>>& candidates) {
  json request;
  request["op"] = "mask_topk";
  request["tokens"] = pieces;
  request["candidates"] = candidates;
  absl::StatusOr<std::string> line = Call(request.dump());
  if (!line.ok()) return line.status();
  absl::StatusOr<std::vector<PieceProbs>> masks = ParseMasks(json::parse(*line));
  if (!masks.ok()) return masks.status();
  if (masks->size() != candidates.size()) {
    return absl::UnavailableError(
        absl::StrCat("bridge answered ", masks->size(), " masks for ",
                     candidates.size()));
  }
  std::vector<std::map<std::string, double>> out;
  for (const PieceProbs& probs : *masks) {
    out.emplace_back(probs.begin(), probs.end());
  }
  return out;
}

absl::StatusOr<LayerVectors> BridgeBackend::EncodeLayers(
    const std::vector<std::string>& pieces) {
  json request;
  request["op"] = "encode_layers";
  request["tokens"] = pieces;
  absl::StatusOr<std::string> line = Call(request.dump());
  if (!line.ok()) return line.status();
  try {
    LayerVectors layers = json::parse(*line).at("layers").get<LayerVectors>();
    if (static_cast<int>(layers.size()) != info_.layers) {
      return absl::UnavailableError(absl::StrCat(
          "bridge returned ", layers.size(), " layers; announced ",
          info_.layers));
    }
    for (const auto& layer : layers) {
      if (layer.size() != pieces.size()) {
        return absl::UnavailableError("bridge returned wrong token count");
      }
      for (const auto& v : layer) {
        if (static_cast<int>(v.size()) != info_.dim) {
          return absl::UnavailableError("bridge returned wrong vector width");
        }
      }
    }
    return layers;
  } catch (const json::exception& e) {
    return absl::UnavailableError(
        absl::StrCat("malformed encode_layers response: ", e.what()));
  }
}

absl::StatusOr<std::unique_ptr<MlmBackend>> OpenBackend(
    const std::string& address) {
  absl::string_view rest = address;
  if (absl::ConsumePrefix(&rest, "mock:")) {
    absl::StatusOr<std::unique_ptr<FixtureBackend>> backend =
        FixtureBackend::Load(std::string(rest));
    if (!backend.ok()) return backend.status();
    return std::unique_ptr<MlmBackend>(std::move(*backend));
  }
  absl::StatusOr<std::unique_ptr<LineChannel>> channel =
      absl::ConsumePrefix(&rest, "unix:") ? ConnectChannel(std::string(rest))
                                          : SpawnChannel(address);
  if (!channel.ok()) return channel.status();
  absl::StatusOr<std::unique_ptr<BridgeBackend>> backend =
      BridgeBackend::Connect(*std::move(channel));
  if (!backend.ok()) return backend.status();
  return std::unique_ptr<MlmBackend>(std::move(*backend));
}

std::string HandleRequest(MlmBackend& backend, absl::string_view line) {
  const json request = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (request.is_discarded() || !request.is_object()) {
    return ErrorResponse(nullptr, "request is not a JSON object").dump();
  }
  const json id = request.value("id", json());
  if (!id.is_string()) {
    return ErrorResponse(id, "request needs a string \"id\"").dump();
  }
  json response;
  response["id"] = id;
  try {
    const std::string op = request.at("op").get<std::string>();
    const auto tokens = request.at("tokens").get<std::vector<std::string>>();
    auto fail = [&](const absl::Status& s) {
      return ErrorResponse(id, s.message()).dump();
    };
    if (op == "tokenize") {
      std::vector<std::string> pieces;
      for (const std::string& text : tokens) {
        absl::StatusOr<std::vector<std::string>> p = backend.Tokenize(text);
        if (!p.ok()) return fail(p.status());
        pieces.insert(pieces.end(), p->begin(), p->end());
      }
      response["pieces"] = pieces;
    } else if (op == "mask_topk") {
      if (CountMasks(tokens, backend.info().mask) == 0) {
        return ErrorResponse(id, "no mask in tokens").dump();
      }
      json masks = json::array();
      if (request.contains("candidates")) {
        const auto candidates =
            request.at("candidates").get<std::vector<std::vector<std::string>>>();
        absl::StatusOr<std::vector<std::map<std::string, double>>> probs =
            backend.MaskProbabilities(tokens, candidates);
        if (!probs.ok()) return fail(probs.status());
        for (size_t i = 0; i < probs->size(); ++i) {
          PieceProbs sorted((*probs)[i].begin(), (*probs)[i].end());
          std::stable_sort(sorted.begin(), sorted.end(),
                           [](const auto& a, const auto& b) {
                             return a.second > b.second;
                           });
          masks.push_back(sorted);
        }
      } else {
        absl::StatusOr<std::vector<PieceProbs>> top =
            backend.MaskTopK(tokens, request.value("topk", 50));
        if (!top.ok()) return fail(top.status());
        for (const PieceProbs& probs : *top) masks.push_back(probs);
      }
      response["masks"] = std::move(masks);
    } else if (op == "encode_layers") {
      absl::StatusOr<LayerVectors> layers = backend.EncodeLayers(tokens);
      if (!layers.ok()) return fail(layers.status());
      response["layers"] = *layers;
    } else {
      return ErrorResponse(id, absl::StrCat("unknown op \"", op, "\"")).dump();
    }
  } catch (const json::exception& e) {
    return ErrorResponse(id, absl::StrCat("malformed request: ", e.what()))
        .dump();
  }
  return response.dump();
}

void ServeBackend(MlmBackend& backend, std::istream& in, std::ostream& out) {
  const MlmInfo& info = backend.info();
  json hello;
  hello["hello"] = {{"layers", info.layers},
                    {"dim", info.dim},
                    {"mask", info.mask},
                    {"cont_marker", info.cont_marker}};
  out << hello.dump() << std::endl;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out << HandleRequest(backend, line) << std::endl;
  }
}

}  // namespace unblend
