/******************************************************************************
 * Copyright 2026 dynvo Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/
#include "dynvo/log.hpp"

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace dynvo::log {

namespace {

Level initial_level() {
  const char* env = std::getenv("DYNVO_LOG");
  if (env == nullptr) return Level::Info;
  if (std::strcmp(env, "error") == 0) return Level::Error;
  if (std::strcmp(env, "warn") == 0) return Level::Warn;
  if (std::strcmp(env, "info") == 0) return Level::Info;
  if (std::strcmp(env, "debug") == 0) return Level::Debug;
  return Level::Info;
}

Level& current_level() {
  static Level level = initial_level();
  return level;
}

void emit(Level level, const char* tag, const char* fmt, va_list args) {
  if (static_cast<int>(level) > static_cast<int>(current_level())) return;
  std::fprintf(stderr, "[dynvo %s] ", tag);
  std::vfprintf(stderr, fmt, args);
  std::fputc('\n', stderr);
}

}  // namespace

Level level() { return current_level(); }
void set_level(Level level) { current_level() = level; }

void error(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  emit(Level::Error, "error", fmt, args);
  va_end(args);
}

void warn(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  emit(Level::Warn, "warn", fmt, args);
  va_end(args);
}

void info(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  emit(Level::Info, "info", fmt, args);
  va_end(args);
}

void debug(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  emit(Level::Debug, "debug", fmt, args);
  va_end(args);
}

}  // namespace dynvo::log
