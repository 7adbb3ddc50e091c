// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "molbench/eval/evaluator.h"
#include "molbench/taskgen/generate.h"

namespace molbench {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
// Missing token, or the endpoint rejected it.
class AuthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
// No usable response after all retries.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
// A response that is not a well-formed completion.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
// A rendered prompt contains the answer that proves its instance solvable.
class LeakageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kSystemPrompt = "Respond with a single SMILES string.";

struct EndpointConfig {
  // e.g. "https://api.example.com/v1"; requests go to <base_url>/chat/completions.
  std::string base_url;
  std::string model_name;
  // Name of the environment variable holding the bearer token.
  std::string auth_token_env_name = "MOLBENCH_API_KEY";
  double timeout_seconds = 120;
  int max_retries = 5;
  int max_concurrency = 4;
  // First backoff delay; doubles per retry, capped at 30 s.
  double backoff_seconds = 1.0;

  // Throws ConfigError.
  void validate() const;
};

struct GenParams {
  double temperature = 0.75;
  double top_p = 0.85;
  int max_new_tokens = 512;
  // Recorded for provenance; chat endpoints sample without beams.
  int num_beams = 1;

  nlohmann::json to_json() const;
};

// Append-only JSONL file of {"key", "raw_output", "timestamp"}. Safe for
// concurrent readers and writers within one process.
class CompletionCache {
 public:
  explicit CompletionCache(std::filesystem::path path);

  static std::string key(const std::string& model, const std::string& prompt, const GenParams& params);

  std::optional<std::string> get(const std::string& key) const;
  // A key already present is left untouched.
  void put(const std::string& key, const std::string& raw_output);
  std::size_t size() const;
  // Lines that could not be read back, e.g. a torn final line.
  std::size_t damaged_lines() const { return damaged_; }

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::string> entries_;
  std::size_t damaged_ = 0;
};

class ChatClient {
 public:
  using Logger = std::function<void(const std::string&)>;

  // Validates the config; the token is looked up lazily, before the first
  // network request.
  explicit ChatClient(EndpointConfig cfg, CompletionCache* cache = nullptr, Logger log = {});

  // Cache hits return the stored bytes without touching the network or the
  // token. Throws AuthError, TransportError or ProtocolError.
  std::string complete(const std::string& prompt, const GenParams& params);

  // Throws AuthError when the token variable is unset or empty.
  std::string token() const;

  const EndpointConfig& config() const { return cfg_; }
  std::size_t requests() const { return requests_; }
  std::size_t retries() const { return retries_; }
  std::size_t cache_hits() const { return cache_hits_; }

 private:
  std::string request(const std::string& body, const std::string& token);

  EndpointConfig cfg_;
  CompletionCache* cache_;
  Logger log_;
  std::string scheme_host_port_;
  std::string path_;
  std::atomic<std::size_t> requests_{0}, retries_{0}, cache_hits_{0};
};

std::string chat_request_body(const std::string& model, const std::string& prompt, const GenParams& params);
// Throws ProtocolError.
std::string parse_chat_response(const std::string& body);

// Ids of instances whose prompt mentions their own witness molecule, compared
// as canonical SMILES token by token.
std::vector<std::string> find_leaks(std::span<const TaskInstance> instances);

struct BatchSummary {
  std::size_t total = 0;
  std::size_t resumed = 0;  // answered by an earlier run
  std::size_t answered = 0;
  std::size_t failed = 0;
};

// Answers every instance and writes one output line per instance, in input
// order, to `out`. Finished answers are journaled next to `out` while the run
// is in progress, so a rerun only requests what is missing or failed. At most
// max_concurrency requests are in flight. Throws LeakageError before any
// request; per-instance errors become failure markers.
BatchSummary run_batch(std::span<const TaskInstance> instances, ChatClient& client, const GenParams& params,
                       const std::filesystem::path& out);

std::filesystem::path journal_path(const std::filesystem::path& out);

}  // namespace molbench
