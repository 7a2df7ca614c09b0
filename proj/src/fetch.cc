// Copyright 2026 The hralloc Authors.
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

#include "hralloc/fetch.h"

#include <atomic>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "httplib.h"

namespace hralloc {

namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string target;  // /path?query
};

ParsedUrl SplitUrl(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw FetchError(FetchErrorKind::kTransport,
                     "endpoint must be an absolute URL: " + url, false);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  out.origin = url.substr(0, path_start);
  out.target = path_start == std::string::npos ? "/" : url.substr(path_start);
  return out;
}

std::string UtcNow() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void WriteFileAtomically(const std::filesystem::path& path,
                         const std::string& contents) {
  static std::atomic<unsigned> counter{0};
  std::ostringstream suffix;
  suffix << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id())
         << '.' << counter++;
  std::filesystem::path temp = path;
  temp += suffix.str();
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + temp.string());
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + temp.string());
  }
  std::filesystem::rename(temp, path);
}

FetchResult FetchRemoteHistory(const FetchOptions& options) {
  if (options.endpoint.empty()) {
    throw FetchError(FetchErrorKind::kTransport, "no endpoint configured", false);
  }
  const ParsedUrl url = SplitUrl(options.endpoint);
  httplib::Client client(url.origin);
  if (!client.is_valid()) {
    throw FetchError(FetchErrorKind::kTransport,
                     "unsupported endpoint " + url.origin, false);
  }
  client.set_connection_timeout(options.timeout);
  client.set_read_timeout(options.timeout);
  if (!options.bearer_token.empty()) {
    client.set_bearer_token_auth(options.bearer_token);
  }

  auto response = client.Get(url.target);
  if (!response) {
    throw FetchError(FetchErrorKind::kTransport,
                     "request to " + options.endpoint +
                         " failed: " + httplib::to_string(response.error()),
                     true);
  }
  const int status = response->status;
  if (status < 200 || status >= 300) {
    const bool retryable = status >= 500 || status == 429 || status == 408;
    throw FetchError(FetchErrorKind::kStatus,
                     "endpoint returned HTTP " + std::to_string(status),
                     retryable, status);
  }

  nlohmann::json records;
  try {
    records = nlohmann::json::parse(response->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw FetchError(FetchErrorKind::kSchema,
                     std::string("response is not JSON: ") + e.what(), false,
                     status);
  }

  FetchResult result;
  try {
    result.histories = HistoryFromJson(records);
  } catch (const IngestError& e) {
    throw FetchError(FetchErrorKind::kSchema, e.what(), false, status);
  }
  if (!options.regions.empty()) {
    const std::set<std::string> keep(options.regions.begin(),
                                     options.regions.end());
    std::erase_if(result.histories,
                  [&keep](const auto& kv) { return !keep.contains(kv.first); });
  }
  result.fetched_at = UtcNow();

  if (!options.cache_path.empty()) {
    nlohmann::json cache = {{"endpoint", options.endpoint},
                            {"fetched_at", result.fetched_at},
                            {"records", HistoryToJson(result.histories)}};
    WriteFileAtomically(options.cache_path, cache.dump(2) + "\n");
  }
  return result;
}

FetchResult LoadCachedHistory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IngestError(std::string("malformed cache file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("records") ||
      !doc.contains("fetched_at") || !doc["fetched_at"].is_string()) {
    throw IngestError("cache file missing records or fetched_at");
  }
  FetchResult out;
  out.histories = HistoryFromJson(doc["records"]);
  out.fetched_at = doc["fetched_at"].get<std::string>();
  return out;
}

}  // namespace hralloc
