// SPDX-License-Identifier: Apache-2.0
#include "molbench/llm/adapter.h"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "molbench/chem/smiles.h"
#include "molbench/util/fs.h"
#include "molbench/util/hash.h"

namespace molbench {

namespace {

constexpr double kMaxBackoffSeconds = 30;
constexpr double kMaxRetryAfterSeconds = 120;

bool transient_status(int status) { return status == 408 || status == 429 || status >= 500; }

std::optional<double> retry_after(const httplib::Result& res) {
  if (!res->has_header("Retry-After")) return std::nullopt;
  try {
    const double s = std::stod(res->get_header_value("Retry-After"));
    if (s >= 0) return std::min(s, kMaxRetryAfterSeconds);
  } catch (const std::exception&) {
    // HTTP-date form: fall back to the backoff schedule.
  }
  return std::nullopt;
}

void sleep_seconds(double s) {
  if (s > 0) std::this_thread::sleep_for(std::chrono::duration<double>(s));
}

std::string strip_token(std::string_view tok) {
  static constexpr std::string_view kEdge = ".,;:!?\"'`*";
  while (!tok.empty() && kEdge.find(tok.back()) != std::string_view::npos) tok.remove_suffix(1);
  while (!tok.empty() && kEdge.find(tok.front()) != std::string_view::npos) tok.remove_prefix(1);
  return std::string(tok);
}

}  // namespace

void EndpointConfig::validate() const {
  if (base_url.rfind("http://", 0) != 0 && base_url.rfind("https://", 0) != 0)
    throw ConfigError("base_url must be an absolute http(s) URL: '" + base_url + "'");
  if (model_name.empty()) throw ConfigError("model_name is empty");
  if (auth_token_env_name.empty()) throw ConfigError("auth_token_env_name is empty");
  if (max_concurrency < 1) throw ConfigError("max_concurrency must be at least 1");
  if (max_retries < 0) throw ConfigError("max_retries must not be negative");
  if (!(timeout_seconds > 0)) throw ConfigError("timeout must be positive");
  if (backoff_seconds < 0) throw ConfigError("backoff must not be negative");
}

nlohmann::json GenParams::to_json() const {
  return {{"temperature", temperature}, {"top_p", top_p}, {"max_new_tokens", max_new_tokens}, {"num_beams", num_beams}};
}

CompletionCache::CompletionCache(std::filesystem::path path) : path_(std::move(path)) {
  if (!std::filesystem::exists(path_)) return;
  for (const std::string& line : read_lines(path_)) {
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      entries_.emplace(j.at("key").get<std::string>(), j.at("raw_output").get<std::string>());
    } catch (const std::exception&) {
      ++damaged_;
    }
  }
}

std::string CompletionCache::key(const std::string& model, const std::string& prompt, const GenParams& params) {
  const nlohmann::json j{{"model", model}, {"prompt", prompt}, {"params", params.to_json()}, {"system", kSystemPrompt}};
  return sha256_hex(j.dump());
}

std::optional<std::string> CompletionCache::get(const std::string& key) const {
  std::lock_guard lock(mu_);
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void CompletionCache::put(const std::string& key, const std::string& raw_output) {
  std::lock_guard lock(mu_);
  if (entries_.count(key)) return;
  const auto now = std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch());
  const nlohmann::json j{{"key", key}, {"raw_output", raw_output}, {"timestamp", now.count()}};
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  out << j.dump() << '\n';
  out.flush();
  if (!out) throw std::runtime_error("cannot append to cache " + path_.string());
  entries_.emplace(key, raw_output);
}

std::size_t CompletionCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::string chat_request_body(const std::string& model, const std::string& prompt, const GenParams& params) {
  const nlohmann::json j{{"model", model},
                         {"messages",
                          {{{"role", "system"}, {"content", kSystemPrompt}}, {{"role", "user"}, {"content", prompt}}}},
                         {"temperature", params.temperature},
                         {"top_p", params.top_p},
                         {"max_tokens", params.max_new_tokens},
                         {"n", 1}};
  return j.dump();
}

std::string parse_chat_response(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("response is not JSON: ") + e.what());
  }
  try {
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (content.is_null()) return "";
    return content.get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw ProtocolError("response has no choices[0].message.content");
  }
}

ChatClient::ChatClient(EndpointConfig cfg, CompletionCache* cache, Logger log)
    : cfg_(std::move(cfg)), cache_(cache), log_(std::move(log)) {
  cfg_.validate();
  const std::size_t scheme_end = cfg_.base_url.find("://") + 3;
  const std::size_t slash = cfg_.base_url.find('/', scheme_end);
  scheme_host_port_ = cfg_.base_url.substr(0, slash);
  std::string prefix = slash == std::string::npos ? "" : cfg_.base_url.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  path_ = prefix + "/chat/completions";
}

std::string ChatClient::token() const {
  const char* t = std::getenv(cfg_.auth_token_env_name.c_str());
  if (t == nullptr || *t == '\0') throw AuthError("environment variable " + cfg_.auth_token_env_name + " is not set");
  return t;
}

std::string ChatClient::complete(const std::string& prompt, const GenParams& params) {
  const std::string key = CompletionCache::key(cfg_.model_name, prompt, params);
  if (cache_ != nullptr)
    if (auto hit = cache_->get(key)) {
      ++cache_hits_;
      return *hit;
    }
  const std::string tok = token();
  std::string text = request(chat_request_body(cfg_.model_name, prompt, params), tok);
  if (cache_ != nullptr) cache_->put(key, text);
  return text;
}

std::string ChatClient::request(const std::string& body, const std::string& token) {
  httplib::Client cli(scheme_host_port_);
  const auto timeout = std::chrono::duration<double>(cfg_.timeout_seconds);
  cli.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  cli.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  cli.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  const httplib::Headers headers = {{"Authorization", "Bearer " + token}};
  double backoff = cfg_.backoff_seconds;
  std::string last_error;
  for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
    if (attempt > 0) ++retries_;
    ++requests_;
    const httplib::Result res = cli.Post(path_, headers, body, "application/json");
    std::optional<double> wait;
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
    } else if (res->status == 200) {
      return parse_chat_response(res->body);
    } else if (res->status == 401 || res->status == 403) {
      throw AuthError("endpoint rejected the token (HTTP " + std::to_string(res->status) + ")");
    } else if (transient_status(res->status)) {
      last_error = "HTTP " + std::to_string(res->status);
      wait = retry_after(res);
    } else {
      throw ProtocolError("HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
    }
    if (attempt == cfg_.max_retries) break;
    const double delay = wait ? *wait : backoff;
    if (log_) log_("retry " + std::to_string(attempt + 1) + " after " + last_error);
    sleep_seconds(delay);
    backoff = std::min(backoff * 2, kMaxBackoffSeconds);
  }
  throw TransportError(last_error + " (after " + std::to_string(cfg_.max_retries) + " retries)");
}

std::vector<std::string> find_leaks(std::span<const TaskInstance> instances) {
  std::vector<std::string> leaks;
  for (const TaskInstance& t : instances) {
    if (!t.witness) continue;
    const std::string target = canonical_smiles(*t.witness);
    std::istringstream in(t.prompt);
    std::string word;
    while (in >> word) {
      const std::string tok = strip_token(word);
      if (tok == *t.witness || (is_valid_smiles(tok) && canonical_smiles(tok) == target)) {
        leaks.push_back(t.id);
        break;
      }
    }
  }
  return leaks;
}

std::filesystem::path journal_path(const std::filesystem::path& out) { return out.string() + ".journal.partial"; }

BatchSummary run_batch(std::span<const TaskInstance> instances, ChatClient& client, const GenParams& params,
                       const std::filesystem::path& out) {
  if (const auto leaks = find_leaks(instances); !leaks.empty())
    throw LeakageError("prompt contains its own answer: " + leaks.front() + " (" + std::to_string(leaks.size()) +
                       " instances)");

  std::unordered_map<std::string, ModelOutput> done;
  auto absorb = [&](const std::filesystem::path& p) {
    if (!std::filesystem::exists(p)) return;
    for (const std::string& line : read_lines(p)) {
      if (line.empty()) continue;
      try {
        ModelOutput o = output_from_json(nlohmann::json::parse(line));
        if (o.text) done[o.id] = std::move(o);
      } catch (const std::exception&) {
        // A torn last line from an interrupted run.
      }
    }
  };
  absorb(out);
  absorb(journal_path(out));

  BatchSummary sum;
  sum.total = instances.size();
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (done.count(instances[i].id))
      ++sum.resumed;
    else
      pending.push_back(i);
  }
  if (!pending.empty()) (void)client.token();

  std::vector<ModelOutput> results(instances.size());
  std::mutex journal_mu;
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  std::ofstream journal(journal_path(out), std::ios::app | std::ios::binary);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < pending.size(); k = next++) {
      const TaskInstance& t = instances[pending[k]];
      ModelOutput o{t.id, std::nullopt, {}};
      try {
        o.text = client.complete(t.prompt, params);
      } catch (const AuthError& e) {
        o.error = std::string("auth: ") + e.what();
      } catch (const TransportError& e) {
        o.error = std::string("transport: ") + e.what();
      } catch (const ProtocolError& e) {
        o.error = std::string("protocol: ") + e.what();
      }
      std::lock_guard lock(journal_mu);
      journal << output_to_json(o).dump() << '\n';
      journal.flush();
      results[pending[k]] = std::move(o);
    }
  };
  const std::size_t workers = std::min<std::size_t>(client.config().max_concurrency, pending.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  journal.close();

  std::string text;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto it = done.find(instances[i].id);
    const ModelOutput& o = it != done.end() ? it->second : results[i];
    if (it == done.end()) (o.text ? sum.answered : sum.failed)++;
    text += output_to_json(o).dump();
    text += '\n';
  }
  write_file_atomic(out, text);
  std::filesystem::remove(journal_path(out));
  return sum;
}

}  // namespace molbench
