#include "ddparse/translation.h"

#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace ddparse {

namespace fs = std::filesystem;

std::string EscapeField(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string UnescapeField(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out += s[i];
      continue;
    }
    switch (s[++i]) {
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      case '\\': out += '\\'; break;
      default:
        out += '\\';
        out += s[i];
    }
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> ReadPairFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TranslationError("cannot open " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw TranslationError(path.string() + ":" + std::to_string(lineno) + ": missing tab");
    }
    out.emplace_back(UnescapeField(line.substr(0, tab)), UnescapeField(line.substr(tab + 1)));
  }
  return out;
}

DictionaryAdapter DictionaryAdapter::FromFile(const fs::path& path) {
  std::map<std::string, std::string> entries;
  for (auto& [src, tgt] : ReadPairFile(path)) entries[std::move(src)] = std::move(tgt);
  return DictionaryAdapter(std::move(entries));
}

std::string DictionaryAdapter::Translate(const std::string& text, const std::string&,
                                         const std::string&) {
  auto it = entries_.find(text);
  if (it == entries_.end()) throw TranslationError("no dictionary entry for '" + text + "'");
  return it->second;
}

HttpAdapter::HttpAdapter(HttpAdapterConfig config) : config_(std::move(config)) {
  const std::string& url = config_.endpoint;
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw TranslationError("endpoint must start with http:// or https://: " + url);
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (!config_.api_key_env.empty()) {
    if (const char* key = std::getenv(config_.api_key_env.c_str())) api_key_ = key;
  }
}

std::string HttpAdapter::Translate(const std::string& text, const std::string& source_lang,
                                   const std::string& target_lang) {
  const std::string body =
      nlohmann::json{{"text", text}, {"source", source_lang}, {"target", target_lang}}.dump();
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  std::string last_error;
  auto delay = config_.backoff;
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    auto res = client.Post(path_, headers, body, "application/json");
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw TranslationError("HTTP " + std::to_string(res->status) + ": " + res->body);
    }
    try {
      const auto reply = nlohmann::json::parse(res->body);
      return reply.at("translation").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw TranslationError(std::string("malformed response: ") + e.what());
    }
  }
  throw TranslationError("giving up after " + std::to_string(config_.retries + 1) +
                         " attempts: " + last_error);
}

CachingAdapter::CachingAdapter(std::shared_ptr<TranslationAdapter> inner, fs::path cache_file,
                               std::string source_lang, std::string target_lang)
    : inner_(std::move(inner)),
      path_(std::move(cache_file)),
      source_lang_(std::move(source_lang)),
      target_lang_(std::move(target_lang)) {
  if (fs::exists(path_)) {
    for (auto& [src, tgt] : ReadPairFile(path_)) cache_[std::move(src)] = std::move(tgt);
  }
}

std::size_t CachingAdapter::cached() const {
  std::shared_lock lock(mu_);
  return cache_.size();
}

std::string CachingAdapter::Translate(const std::string& text, const std::string& source_lang,
                                      const std::string& target_lang) {
  if (source_lang != source_lang_ || target_lang != target_lang_) {
    return inner_->Translate(text, source_lang, target_lang);
  }
  {
    std::shared_lock lock(mu_);
    auto it = cache_.find(text);
    if (it != cache_.end()) return it->second;
  }
  std::string translation = inner_->Translate(text, source_lang, target_lang);
  std::lock_guard write_lock(write_mu_);
  {
    std::unique_lock lock(mu_);
    auto [it, inserted] = cache_.emplace(text, translation);
    if (!inserted) return it->second;
  }
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw TranslationError("cannot append to cache " + path_.string());
  out << EscapeField(text) << '\t' << EscapeField(translation) << '\n';
  return translation;
}

}  // namespace ddparse
