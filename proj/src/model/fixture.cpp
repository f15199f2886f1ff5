// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tinykg/model/fixture.hpp"

#include <cstring>
#include <map>
#include <memory>
#include <numeric>
#include <variant>

namespace tinykg::model {
namespace {

// A tiny object model for writing flatbuffers front to back. Each table's
// vtable precedes it; children are appended after their parent and the
// parent's forward offsets are patched once their positions are known.
struct Node;
using NodePtr = std::shared_ptr<Node>;

struct Scalar {
  std::vector<std::uint8_t> bytes;
};

struct Node {
  enum class Kind { kTable, kScalarVector, kNodeVector, kString } kind = Kind::kTable;
  std::map<int, std::variant<Scalar, NodePtr>> fields;  // kTable
  std::vector<std::uint8_t> payload;                    // kScalarVector, kString
  std::size_t elem_size = 1;
  std::size_t count = 0;
  std::vector<NodePtr> children;  // kNodeVector
};

template <typename T>
Scalar scalar(T v) {
  Scalar s;
  s.bytes.resize(sizeof(T));
  std::memcpy(s.bytes.data(), &v, sizeof(T));
  return s;
}

NodePtr table() { return std::make_shared<Node>(); }

NodePtr string_node(const std::string& s) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::kString;
  n->payload.assign(s.begin(), s.end());
  n->count = s.size();
  return n;
}

template <typename T>
NodePtr scalar_vector(const std::vector<T>& values) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::kScalarVector;
  n->elem_size = sizeof(T);
  n->count = values.size();
  n->payload.resize(values.size() * sizeof(T));
  if (!values.empty()) std::memcpy(n->payload.data(), values.data(), n->payload.size());
  return n;
}

NodePtr node_vector(std::vector<NodePtr> children) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::kNodeVector;
  n->count = children.size();
  n->children = std::move(children);
  return n;
}

class Writer {
 public:
  std::vector<std::uint8_t> finish(const NodePtr& root, bool identifier) {
    out_.assign(8, 0);
    if (identifier) std::memcpy(out_.data() + 4, "TFL3", 4);
    std::size_t pos = write(root);
    put_u32(0, static_cast<std::uint32_t>(pos));
    return std::move(out_);
  }

 private:
  void align(std::size_t a) {
    while (out_.size() % a != 0) out_.push_back(0);
  }
  void put_u32(std::size_t at, std::uint32_t v) { std::memcpy(out_.data() + at, &v, 4); }
  void append(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  void patch(std::size_t slot, std::size_t target) {
    put_u32(slot, static_cast<std::uint32_t>(target - slot));
  }

  std::size_t write(const NodePtr& n) {
    switch (n->kind) {
      case Node::Kind::kString:
      case Node::Kind::kScalarVector: {
        align(4);
        // Keep 8-byte elements naturally aligned.
        if (n->elem_size == 8 && (out_.size() + 4) % 8 != 0) append("\0\0\0\0", 4);
        std::size_t pos = out_.size();
        auto count = static_cast<std::uint32_t>(n->count);
        append(&count, 4);
        append(n->payload.data(), n->payload.size());
        if (n->kind == Node::Kind::kString) out_.push_back(0);
        return pos;
      }
      case Node::Kind::kNodeVector: {
        align(4);
        std::size_t pos = out_.size();
        auto count = static_cast<std::uint32_t>(n->count);
        append(&count, 4);
        std::vector<std::size_t> slots;
        for (std::size_t i = 0; i < n->children.size(); ++i) {
          slots.push_back(out_.size());
          append("\0\0\0\0", 4);
        }
        for (std::size_t i = 0; i < n->children.size(); ++i) patch(slots[i], write(n->children[i]));
        return pos;
      }
      case Node::Kind::kTable:
        return write_table(*n);
    }
    return 0;
  }

  std::size_t write_table(const Node& n) {
    // Inline layout: soffset, then fields in id order, aligned to min(width, 4).
    int max_id = n.fields.empty() ? -1 : n.fields.rbegin()->first;
    std::vector<std::uint16_t> slots(static_cast<std::size_t>(max_id + 1), 0);
    std::size_t inline_size = 4;
    std::map<int, std::size_t> field_offset;
    for (const auto& [id, value] : n.fields) {
      std::size_t width = std::holds_alternative<Scalar>(value)
                              ? std::get<Scalar>(value).bytes.size()
                              : 4;
      std::size_t a = width >= 4 ? 4 : width;
      inline_size = (inline_size + a - 1) / a * a;
      field_offset[id] = inline_size;
      slots[static_cast<std::size_t>(id)] = static_cast<std::uint16_t>(inline_size);
      inline_size += width;
    }
    inline_size = (inline_size + 3) / 4 * 4;

    align(4);
    std::size_t vtable = out_.size();
    auto vt_size = static_cast<std::uint16_t>(4 + 2 * slots.size());
    auto tbl_size = static_cast<std::uint16_t>(inline_size);
    append(&vt_size, 2);
    append(&tbl_size, 2);
    for (auto s : slots) append(&s, 2);
    align(4);
    std::size_t pos = out_.size();
    out_.resize(pos + inline_size, 0);
    auto soff = static_cast<std::int32_t>(pos - vtable);
    std::memcpy(out_.data() + pos, &soff, 4);

    std::vector<std::pair<std::size_t, NodePtr>> pending;
    for (const auto& [id, value] : n.fields) {
      std::size_t at = pos + field_offset[id];
      if (const auto* s = std::get_if<Scalar>(&value)) {
        std::memcpy(out_.data() + at, s->bytes.data(), s->bytes.size());
      } else {
        pending.emplace_back(at, std::get<NodePtr>(value));
      }
    }
    for (const auto& [slot, child] : pending) patch(slot, write(child));
    return pos;
  }

  std::vector<std::uint8_t> out_;
};

std::uint64_t elements(const std::vector<std::int32_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::uint64_t{1},
                         [](std::uint64_t a, std::int32_t d) { return a * static_cast<std::uint64_t>(d); });
}

struct TensorDraft {
  std::string name;
  std::vector<std::int32_t> shape;
  TensorType type;
  std::uint32_t buffer;
  const OutputQuantization* quant = nullptr;
};

NodePtr tensor_node(const TensorDraft& t) {
  auto n = table();
  n->fields[0] = scalar_vector(t.shape);
  n->fields[1] = scalar(static_cast<std::int8_t>(t.type));
  n->fields[2] = scalar(t.buffer);
  n->fields[3] = string_node(t.name);
  if (t.quant) {
    auto q = table();
    q->fields[2] = scalar_vector(t.quant->scales);
    std::vector<std::int64_t> zps(t.quant->scales.size(), t.quant->zero_point);
    q->fields[3] = scalar_vector(zps);
    n->fields[4] = q;
  }
  return n;
}

void check_spec(const std::vector<LayerSpec>& layers) {
  if (layers.empty()) throw FixtureError("fixture spec has no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const LayerSpec& l = layers[i];
    std::string at = "layer " + std::to_string(i) + ": ";
    if (!has_layer_name(l.opcode)) {
      throw FixtureError(at + "unsupported op " + std::to_string(l.opcode));
    }
    if (l.input_shape.empty() || l.output_shape.empty()) throw FixtureError(at + "empty shape");
    for (const auto* shape : {&l.input_shape, &l.output_shape, &l.weight_shape}) {
      for (auto d : *shape) {
        if (d <= 0) throw FixtureError(at + "non-positive dimension");
      }
    }
    if (i > 0 && layers[i - 1].output_shape != l.input_shape) {
      throw FixtureError(at + "input shape does not continue the chain");
    }
    if (i > 0 && layers[i - 1].dtype != l.dtype) {
      throw FixtureError(at + "dtype does not continue the chain");
    }
    if (type_bits(l.dtype) == 0 || l.dtype == TensorType::kString) {
      throw FixtureError(at + "unsupported dtype");
    }
    if (l.bias && l.weight_shape.empty()) throw FixtureError(at + "bias without weights");
    if (l.quantization) {
      if (l.quantization->scales.empty()) throw FixtureError(at + "quantization without scale");
      for (float s : l.quantization->scales) {
        if (!(s > 0.0f)) throw FixtureError(at + "non-positive scale");
      }
    }
  }
}

}  // namespace

LayerSpec fully_connected(std::int32_t in, std::int32_t out, bool bias) {
  LayerSpec l;
  l.opcode = op::kFullyConnected;
  l.input_shape = {1, in};
  l.output_shape = {1, out};
  l.weight_shape = {out, in};
  l.bias = bias;
  return l;
}

std::vector<std::uint8_t> build_fixture(const std::vector<LayerSpec>& layers,
                                        const FixtureOptions& options) {
  check_spec(layers);

  // Buffer 0 is the conventional empty sentinel.
  std::vector<std::vector<std::uint8_t>> buffers(1);
  std::vector<TensorDraft> tensors;
  std::vector<int> codes;
  std::map<int, std::uint32_t> code_index;
  std::vector<NodePtr> operators;

  auto add_tensor = [&](TensorDraft t) {
    tensors.push_back(std::move(t));
    return static_cast<std::int32_t>(tensors.size() - 1);
  };
  auto constant_buffer = [&](std::uint64_t bytes, std::uint8_t fill) {
    buffers.emplace_back(static_cast<std::size_t>(bytes), fill);
    return static_cast<std::uint32_t>(buffers.size() - 1);
  };

  std::int32_t current = add_tensor({"input", layers[0].input_shape, layers[0].dtype, 0});
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const LayerSpec& l = layers[i];
    std::string tag = "layer" + std::to_string(i);
    std::vector<std::int32_t> inputs{current};
    if (!l.weight_shape.empty()) {
      std::uint64_t bytes = (elements(l.weight_shape) * type_bits(l.dtype) + 7) / 8;
      auto buf = constant_buffer(bytes, static_cast<std::uint8_t>(i + 1));
      inputs.push_back(add_tensor({tag + "/weights", l.weight_shape, l.dtype, buf}));
      if (l.bias) {
        std::int32_t width = l.output_shape.back();
        auto bbuf = constant_buffer(static_cast<std::uint64_t>(width) * 4, 0);
        inputs.push_back(add_tensor({tag + "/bias", {width}, TensorType::kInt32, bbuf}));
      }
    }
    TensorDraft out{tag + "/output", l.output_shape, l.dtype, 0};
    if (l.quantization) out.quant = &*l.quantization;
    current = add_tensor(out);

    auto [it, fresh] = code_index.emplace(l.opcode, static_cast<std::uint32_t>(codes.size()));
    if (fresh) codes.push_back(l.opcode);
    auto o = table();
    o->fields[0] = scalar(it->second);
    o->fields[1] = scalar_vector(inputs);
    o->fields[2] = scalar_vector(std::vector<std::int32_t>{current});
    operators.push_back(o);
  }
  if (options.pad_to_bytes > 0) buffers.emplace_back();  // sized below

  auto make_model = [&](std::size_t padding) {
    auto model = table();
    model->fields[0] = scalar(std::uint32_t{3});
    std::vector<NodePtr> code_nodes;
    for (int c : codes) {
      auto n = table();
      if (options.deprecated_opcode_field) {
        n->fields[0] = scalar(static_cast<std::int8_t>(c));
      } else {
        n->fields[0] = scalar(static_cast<std::int8_t>(c < 127 ? c : 127));
        n->fields[3] = scalar(static_cast<std::int32_t>(c));
      }
      n->fields[2] = scalar(std::int32_t{1});
      code_nodes.push_back(n);
    }
    model->fields[1] = node_vector(code_nodes);

    auto subgraph = [&](const std::string& name) {
      auto sub = table();
      std::vector<NodePtr> tnodes;
      for (const auto& t : tensors) tnodes.push_back(tensor_node(t));
      sub->fields[0] = node_vector(tnodes);
      sub->fields[1] = scalar_vector(std::vector<std::int32_t>{0});
      sub->fields[2] = scalar_vector(std::vector<std::int32_t>{current});
      sub->fields[3] = node_vector(operators);
      sub->fields[4] = string_node(name);
      return sub;
    };
    std::vector<NodePtr> subs{subgraph("main")};
    for (int k = 0; k < options.extra_subgraphs; ++k) subs.push_back(subgraph("extra" + std::to_string(k)));
    model->fields[2] = node_vector(subs);
    model->fields[3] = string_node(options.description);

    std::vector<NodePtr> bnodes;
    for (std::size_t i = 0; i < buffers.size(); ++i) {
      auto b = table();
      bool pad = options.pad_to_bytes > 0 && i + 1 == buffers.size();
      if (pad) {
        b->fields[0] = scalar_vector(std::vector<std::uint8_t>(padding, 0));
      } else if (!buffers[i].empty()) {
        b->fields[0] = scalar_vector(buffers[i]);
      }
      bnodes.push_back(b);
    }
    model->fields[4] = node_vector(bnodes);
    return Writer().finish(model, options.file_identifier);
  };

  std::vector<std::uint8_t> bytes = make_model(0);
  if (options.pad_to_bytes > 0) {
    if (bytes.size() > options.pad_to_bytes) {
      throw FixtureError("fixture already exceeds the requested size");
    }
    // The padding buffer's payload grows the file one-for-one, up to
    // alignment slack, so a few corrective passes converge.
    std::size_t padding = options.pad_to_bytes - bytes.size();
    for (int attempt = 0; attempt < 8 && bytes.size() != options.pad_to_bytes; ++attempt) {
      bytes = make_model(padding);
      if (bytes.size() < options.pad_to_bytes) {
        padding += options.pad_to_bytes - bytes.size();
      } else if (bytes.size() > options.pad_to_bytes) {
        std::size_t over = bytes.size() - options.pad_to_bytes;
        if (over > padding) break;
        padding -= over;
      }
    }
    if (bytes.size() != options.pad_to_bytes) {
      throw FixtureError("cannot pad fixture to exactly " + std::to_string(options.pad_to_bytes) +
                         " bytes");
    }
  }
  return bytes;
}

std::vector<LayerSpec> fixture_spec(const ModelGraph& g) {
  std::vector<LayerSpec> out;
  for (const auto& o : g.operators) {
    LayerSpec l;
    l.opcode = o.opcode;
    const TensorInfo& in = g.tensors.at(static_cast<std::size_t>(o.inputs.at(0)));
    const TensorInfo& res = g.tensors.at(static_cast<std::size_t>(o.outputs.at(0)));
    l.input_shape = in.shape;
    l.output_shape = res.shape;
    l.dtype = res.type;
    if (o.inputs.size() > 1) {
      l.weight_shape = g.tensors.at(static_cast<std::size_t>(o.inputs[1])).shape;
    }
    l.bias = o.inputs.size() > 2;
    if (res.quantization) {
      OutputQuantization q;
      q.scales = res.quantization->scales;
      q.zero_point = res.quantization->zero_points.empty() ? 0 : res.quantization->zero_points[0];
      l.quantization = q;
    }
    out.push_back(std::move(l));
  }
  return out;
}

}  // namespace tinykg::model
