// Copyright (c) 2026 The artext Authors. All Rights Reserved.
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


#include "artext/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <unordered_map>

#include "artext/error.hpp"

namespace artext {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace {

class Writer {
 public:
  template <typename V>
  void put(V v) {
    const auto* p = reinterpret_cast<const uint8_t*>(&v);
    bytes.insert(bytes.end(), p, p + sizeof(V));
  }
  void put_bytes(const void* data, size_t n) {
    const auto* p = static_cast<const uint8_t*>(data);
    bytes.insert(bytes.end(), p, p + n);
  }
  std::vector<uint8_t> bytes;
};

class Reader {
 public:
  Reader(const std::vector<uint8_t>& bytes, const std::string& name) : bytes_(bytes), name_(name) {}

  template <typename V>
  V get(const char* what) {
    V v;
    need(sizeof(V), what);
    std::memcpy(&v, bytes_.data() + pos_, sizeof(V));
    pos_ += sizeof(V);
    return v;
  }
  void get_bytes(void* out, size_t n, const char* what) {
    need(n, what);
    std::memcpy(out, bytes_.data() + pos_, n);
    pos_ += n;
  }
  void need(size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) {
      fail(ErrorKind::kFormat, name_ + ": truncated checkpoint while reading " + what);
    }
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  const std::vector<uint8_t>& bytes_;
  std::string name_;
  size_t pos_ = 0;
};

}  // namespace

std::vector<uint8_t> serialize_checkpoint(const ParameterStore<float>& store, const CheckpointInfo& info,
                                          bool with_optimizer) {
  Writer w;
  w.put_bytes("ATXD", 4);
  w.put<uint32_t>(kCheckpointVersion);
  w.put<uint32_t>(static_cast<uint32_t>(store.parameters().size()));
  for (const auto& p : store.parameters()) {
    w.put<uint32_t>(static_cast<uint32_t>(p.name.size()));
    w.put_bytes(p.name.data(), p.name.size());
    w.put<uint8_t>(0);
    const Shape& s = p.value.shape();
    w.put<uint8_t>(static_cast<uint8_t>(s.rank()));
    for (int i = 0; i < s.rank(); ++i) w.put<uint32_t>(static_cast<uint32_t>(s[i]));
    w.put_bytes(p.value.ptr(), static_cast<size_t>(p.value.numel()) * sizeof(float));
  }
  w.put<uint64_t>(info.config_digest);
  w.put<uint32_t>(info.epoch);
  w.put<uint8_t>(with_optimizer ? 1 : 0);
  if (with_optimizer) {
    for (const auto& p : store.parameters()) {
      w.put<int64_t>(p.step);
      const size_t n = static_cast<size_t>(p.value.numel());
      std::vector<float> m = p.first_moment, v = p.second_moment;
      m.resize(n, 0.0f);
      v.resize(n, 0.0f);
      w.put_bytes(m.data(), n * sizeof(float));
      w.put_bytes(v.data(), n * sizeof(float));
    }
  }
  return std::move(w.bytes);
}

CheckpointInfo deserialize_checkpoint(const std::vector<uint8_t>& bytes, ParameterStore<float>& store,
                                      bool load_optimizer, const std::string& name) {
  Reader r(bytes, name);
  char magic[4];
  r.get_bytes(magic, 4, "magic");
  if (std::memcmp(magic, "ATXD", 4) != 0) fail(ErrorKind::kFormat, name + ": not a checkpoint (bad magic)");
  const auto version = r.get<uint32_t>("version");
  if (version != kCheckpointVersion) {
    fail(ErrorKind::kFormat, name + ": checkpoint version " + std::to_string(version) + " unsupported (expected " +
                                 std::to_string(kCheckpointVersion) + ")");
  }
  const auto count = r.get<uint32_t>("tensor count");
  std::unordered_map<std::string, Parameter<float>*> by_name;
  for (auto& p : store.parameters()) by_name[p.name] = &p;
  std::vector<Parameter<float>*> order;
  // Values are staged so a failing load leaves the store untouched.
  std::vector<std::vector<float>> staged;
  for (uint32_t t = 0; t < count; ++t) {
    const auto len = r.get<uint32_t>("name length");
    r.need(len, "parameter name");
    std::string pname(len, '\0');
    r.get_bytes(pname.data(), len, "parameter name");
    const auto dtype = r.get<uint8_t>("dtype");
    if (dtype != 0) fail(ErrorKind::kFormat, name + ": parameter " + pname + " has unknown dtype " + std::to_string(dtype));
    const auto ndim = r.get<uint8_t>("rank");
    if (ndim < 1 || ndim > 4) fail(ErrorKind::kFormat, name + ": parameter " + pname + " has invalid rank");
    std::vector<uint32_t> dims(ndim);
    uint64_t numel = 1;
    for (auto& d : dims) {
      d = r.get<uint32_t>("dimension");
      numel *= d;
    }
    auto it = by_name.find(pname);
    if (it == by_name.end()) fail(ErrorKind::kFormat, name + ": unknown parameter " + pname);
    const Shape& expect = it->second->value.shape();
    bool same = expect.rank() == ndim;
    for (int i = 0; same && i < ndim; ++i) same = expect[i] == static_cast<int>(dims[static_cast<size_t>(i)]);
    if (!same) {
      std::string got;
      for (auto d : dims) got += (got.empty() ? "" : "x") + std::to_string(d);
      fail(ErrorKind::kFormat, name + ": shape mismatch for parameter " + pname + ": file has " + got +
                                   ", model expects " + expect.str());
    }
    r.need(numel * sizeof(float), "parameter values");
    std::vector<float> values(numel);
    r.get_bytes(values.data(), numel * sizeof(float), "parameter values");
    order.push_back(it->second);
    staged.push_back(std::move(values));
    by_name.erase(it);
  }
  if (!by_name.empty()) {
    fail(ErrorKind::kFormat, name + ": checkpoint lacks parameter " + by_name.begin()->second->name);
  }
  CheckpointInfo info;
  info.config_digest = r.get<uint64_t>("config digest");
  info.epoch = r.get<uint32_t>("epoch");
  info.has_optimizer = r.get<uint8_t>("optimizer flag") != 0;
  std::vector<int64_t> steps;
  std::vector<std::vector<float>> first, second;
  if (info.has_optimizer) {
    for (auto* p : order) {
      const size_t n = static_cast<size_t>(p->value.numel());
      steps.push_back(r.get<int64_t>("optimizer step"));
      first.emplace_back(n);
      second.emplace_back(n);
      r.get_bytes(first.back().data(), n * sizeof(float), "first moment");
      r.get_bytes(second.back().data(), n * sizeof(float), "second moment");
    }
  }
  if (!r.done()) fail(ErrorKind::kFormat, name + ": trailing bytes after checkpoint");
  for (size_t i = 0; i < order.size(); ++i) {
    std::copy(staged[i].begin(), staged[i].end(), order[i]->value.data().begin());
    if (info.has_optimizer && load_optimizer) {
      order[i]->step = steps[i];
      order[i]->first_moment = std::move(first[i]);
      order[i]->second_moment = std::move(second[i]);
    }
  }
  return info;
}

void save_checkpoint(const std::string& path, const ParameterStore<float>& store, const CheckpointInfo& info,
                     bool with_optimizer) {
  const auto bytes = serialize_checkpoint(store, info, with_optimizer);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kIo, "cannot write checkpoint " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::kIo, "write failed for checkpoint " + path);
}

CheckpointInfo load_checkpoint(const std::string& path, ParameterStore<float>& store, bool load_optimizer) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open checkpoint " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_checkpoint(bytes, store, load_optimizer, path);
}

}  // namespace artext
