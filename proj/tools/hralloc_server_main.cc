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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hralloc/service.h"
#include "httplib.h"

int main(int argc, char** argv) {
  CLI::App app{"Allocation scenario service", "hralloc-server"};
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string store_path = "scenarios.json";
  std::string static_dir;
  std::string cors_origin = "*";
  app.add_option("--host", host, "Bind address");
  app.add_option("--port", port, "Listen port")->check(CLI::Range(0, 65535));
  app.add_option("--store", store_path, "Scenario store file");
  app.add_option("--static", static_dir, "Serve UI assets from this directory");
  app.add_option("--cors-origin", cors_origin, "Allowed CORS origin");
  CLI11_PARSE(app, argc, argv);

  try {
    hralloc::ScenarioStore store(store_path);
    hralloc::AllocationService service(store);
    httplib::Server server;
    service.Mount(server, cors_origin);
    if (!static_dir.empty() && !server.set_mount_point("/", static_dir)) {
      std::cerr << "cannot serve static assets from " << static_dir << '\n';
      return 2;
    }
    std::cerr << "listening on http://" << host << ':' << port << '\n';
    if (!server.listen(host, port)) {
      std::cerr << "cannot listen on " << host << ':' << port << '\n';
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
