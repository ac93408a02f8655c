#ifndef DDPARSE_TRANSLATION_H_
#define DDPARSE_TRANSLATION_H_

// Pluggable EDU translation backends.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "ddparse/errors.h"

namespace ddparse {

class TranslationError : public Error {
 public:
  using Error::Error;
};

class TranslationAdapter {
 public:
  virtual ~TranslationAdapter() = default;
  // Throws TranslationError when no translation can be produced.
  virtual std::string Translate(const std::string& text, const std::string& source_lang,
                                const std::string& target_lang) = 0;
};

// Returns the input unchanged.
class IdentityAdapter final : public TranslationAdapter {
 public:
  std::string Translate(const std::string& text, const std::string&,
                        const std::string&) override {
    return text;
  }
};

// Exact-match lookup table, usually read from a `source<TAB>target` file.
class DictionaryAdapter final : public TranslationAdapter {
 public:
  explicit DictionaryAdapter(std::map<std::string, std::string> entries)
      : entries_(std::move(entries)) {}
  static DictionaryAdapter FromFile(const std::filesystem::path& path);

  std::string Translate(const std::string& text, const std::string& source_lang,
                        const std::string& target_lang) override;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::string> entries_;
};

struct HttpAdapterConfig {
  // http(s)://host[:port]/path
  std::string endpoint;
  // Name of the environment variable holding the API key; empty for none.
  std::string api_key_env;
  int retries = 3;
  std::chrono::milliseconds backoff{250};
  std::chrono::seconds timeout{30};
};

// POSTs {"text", "source", "target"} as JSON and reads {"translation"} back.
// Connection failures, 429 and 5xx responses are retried with exponential
// backoff; anything else fails immediately.
class HttpAdapter final : public TranslationAdapter {
 public:
  explicit HttpAdapter(HttpAdapterConfig config);

  std::string Translate(const std::string& text, const std::string& source_lang,
                        const std::string& target_lang) override;

 private:
  HttpAdapterConfig config_;
  std::string scheme_host_port_;
  std::string path_;
  std::string api_key_;
};

// Wraps another adapter with an append-only `source<TAB>target` cache file
// for one language pair. Safe for concurrent callers; cache writes are
// serialized.
class CachingAdapter final : public TranslationAdapter {
 public:
  CachingAdapter(std::shared_ptr<TranslationAdapter> inner, std::filesystem::path cache_file,
                 std::string source_lang = "zh", std::string target_lang = "en");

  std::string Translate(const std::string& text, const std::string& source_lang,
                        const std::string& target_lang) override;
  std::size_t cached() const;

 private:
  std::shared_ptr<TranslationAdapter> inner_;
  std::filesystem::path path_;
  std::string source_lang_;
  std::string target_lang_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::string> cache_;
  std::mutex write_mu_;
};

// Tab-separated pair files. Tabs, newlines and backslashes inside fields are
// written as \t, \n and \\.
std::vector<std::pair<std::string, std::string>> ReadPairFile(const std::filesystem::path& path);
std::string EscapeField(const std::string& s);
std::string UnescapeField(const std::string& s);

}  // namespace ddparse

#endif  // DDPARSE_TRANSLATION_H_
