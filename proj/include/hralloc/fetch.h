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

// HTTP client for case-history endpoints returning the history-JSON shape.

#ifndef HRALLOC_FETCH_H_
#define HRALLOC_FETCH_H_

#include <chrono>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "hralloc/ingest.h"

namespace hralloc {

inline constexpr const char* kEndpointEnvVar = "ALLOC_CASE_ENDPOINT";

enum class FetchErrorKind { kTransport, kStatus, kSchema };

class FetchError : public std::runtime_error {
 public:
  FetchError(FetchErrorKind kind, const std::string& message, bool retryable,
             int status = 0)
      : std::runtime_error(message),
        kind_(kind),
        retryable_(retryable),
        status_(status) {}
  FetchErrorKind kind() const { return kind_; }
  bool retryable() const { return retryable_; }
  int status() const { return status_; }

 private:
  FetchErrorKind kind_;
  bool retryable_;
  int status_;
};

struct FetchOptions {
  std::string endpoint;              // http://host[:port]/path[?query]
  std::vector<std::string> regions;  // empty keeps every region
  std::filesystem::path cache_path;  // empty disables caching
  std::string bearer_token;
  std::chrono::seconds timeout{30};
};

struct FetchResult {
  HistoryMap histories;
  std::string fetched_at;  // UTC, ISO-8601
};

/// GETs the endpoint, validates the body like LoadCaseHistory, filters by
/// region and, when a cache path is set, writes
///   {"endpoint": ..., "fetched_at": ..., "records": [...]}
/// through a temporary file renamed into place.
FetchResult FetchRemoteHistory(const FetchOptions& options);

/// Reads a cache file written by FetchRemoteHistory.
FetchResult LoadCachedHistory(const std::filesystem::path& path);

/// Writes `contents` to `path` via a sibling temporary file and rename.
void WriteFileAtomically(const std::filesystem::path& path,
                         const std::string& contents);

}  // namespace hralloc

#endif  // HRALLOC_FETCH_H_
