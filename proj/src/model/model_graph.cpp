// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tinykg/model/model_graph.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

namespace tinykg::model {

int type_bits(TensorType t) {
  switch (t) {
    case TensorType::kBool:
    case TensorType::kInt8:
    case TensorType::kUInt8:
    case TensorType::kString:
      return 8;
    case TensorType::kFloat16:
    case TensorType::kInt16:
    case TensorType::kUInt16:
      return 16;
    case TensorType::kFloat32:
    case TensorType::kInt32:
    case TensorType::kUInt32:
      return 32;
    case TensorType::kFloat64:
    case TensorType::kInt64:
    case TensorType::kUInt64:
    case TensorType::kComplex64:
      return 64;
    case TensorType::kComplex128:
      return 128;
    case TensorType::kInt4:
      return 4;
    case TensorType::kResource:
    case TensorType::kVariant:
      return 0;
  }
  return 0;
}

std::string type_name(TensorType t) {
  switch (t) {
    case TensorType::kFloat32: return "float32";
    case TensorType::kFloat16: return "float16";
    case TensorType::kInt32: return "int32";
    case TensorType::kUInt8: return "uint8";
    case TensorType::kInt64: return "int64";
    case TensorType::kString: return "string";
    case TensorType::kBool: return "bool";
    case TensorType::kInt16: return "int16";
    case TensorType::kComplex64: return "complex64";
    case TensorType::kInt8: return "int8";
    case TensorType::kFloat64: return "float64";
    case TensorType::kComplex128: return "complex128";
    case TensorType::kUInt64: return "uint64";
    case TensorType::kResource: return "resource";
    case TensorType::kVariant: return "variant";
    case TensorType::kUInt32: return "uint32";
    case TensorType::kUInt16: return "uint16";
    case TensorType::kInt4: return "int4";
  }
  return "unknown";
}

bool has_layer_name(int code) {
  switch (code) {
    case op::kAveragePool2D:
    case op::kConv2D:
    case op::kDepthwiseConv2D:
    case op::kDequantize:
    case op::kFullyConnected:
    case op::kMaxPool2D:
    case op::kReshape:
    case op::kSoftmax:
    case op::kQuantize:
      return true;
    default:
      return false;
  }
}

std::string layer_type_name(int code) {
  switch (code) {
    case op::kAveragePool2D: return "AveragePool2D";
    case op::kConv2D: return "Conv2D";
    case op::kDepthwiseConv2D: return "DepthwiseConv2D";
    case op::kDequantize: return "Dequantize";
    case op::kFullyConnected: return "FullyConnected";
    case op::kMaxPool2D: return "MaxPool2D";
    case op::kReshape: return "Reshape";
    case op::kSoftmax: return "Softmax";
    case op::kQuantize: return "Quantize";
    default: return "Other(" + std::to_string(code) + ")";
  }
}

std::uint64_t TensorInfo::element_count() const {
  std::uint64_t n = 1;
  for (std::int32_t d : shape) n *= static_cast<std::uint64_t>(d < 0 ? 0 : d);
  return n;
}

std::uint64_t TensorInfo::byte_size() const {
  return (element_count() * static_cast<std::uint64_t>(type_bits(type)) + 7) / 8;
}

namespace {

// Schema field ids.
namespace f {
constexpr int kModelVersion = 0, kModelOpcodes = 1, kModelSubgraphs = 2,
              kModelDescription = 3, kModelBuffers = 4;
constexpr int kSubTensors = 0, kSubInputs = 1, kSubOutputs = 2, kSubOperators = 3,
              kSubName = 4;
constexpr int kTensorShape = 0, kTensorType = 1, kTensorBuffer = 2, kTensorName = 3,
              kTensorQuant = 4;
constexpr int kQuantScale = 2, kQuantZeroPoint = 3;
constexpr int kOpIndex = 0, kOpInputs = 1, kOpOutputs = 2;
constexpr int kCodeDeprecated = 0, kCodeVersion = 2, kCodeBuiltin = 3;
constexpr int kBufferData = 0, kBufferOffset = 1, kBufferSize = 2;
}  // namespace f

std::vector<std::int32_t> int_vector(const fb::Table& t, int id, const char* what) {
  std::vector<std::int32_t> out;
  if (auto v = t.vector(id, 4, what)) {
    out.reserve(v->size());
    for (std::size_t i = 0; i < v->size(); ++i) out.push_back(v->scalar<std::int32_t>(i));
  }
  return out;
}

class ModelReader {
 public:
  explicit ModelReader(std::span<const std::uint8_t> data) : bytes_(data) {}

  ModelGraph read() {
    fb::Table model = fb::root(bytes_);
    graph_.file_size_bytes = bytes_.size();
    if (std::memcmp(bytes_.at(4), "TFL3", 4) != 0) {
      graph_.warnings.push_back("missing file identifier TFL3");
    }
    graph_.version = model.scalar<std::uint32_t>(f::kModelVersion, 0, "Model.version");
    if (auto d = model.string(f::kModelDescription, "Model.description")) {
      graph_.description = std::string(*d);
    }
    read_opcodes(model);
    std::vector<bool> constant = read_buffers(model);

    auto subgraphs = model.vector(f::kModelSubgraphs, 4, "Model.subgraphs");
    if (!subgraphs || subgraphs->size() == 0) {
      throw MalformedFileError(model.position(), "model has no subgraphs");
    }
    if (subgraphs->size() > 1) {
      graph_.warnings.push_back("model has " + std::to_string(subgraphs->size()) +
                                " subgraphs; only subgraph 0 is analysed");
    }
    read_subgraph(subgraphs->table(0), constant);
    return std::move(graph_);
  }

 private:
  void read_opcodes(const fb::Table& model) {
    auto codes = model.vector(f::kModelOpcodes, 4, "Model.operator_codes");
    if (!codes) return;
    for (std::size_t i = 0; i < codes->size(); ++i) {
      fb::Table c = codes->table(i);
      OperatorCode oc;
      int deprecated = c.scalar<std::int8_t>(f::kCodeDeprecated, 0, "OperatorCode");
      int builtin = c.scalar<std::int32_t>(f::kCodeBuiltin, 0, "OperatorCode");
      // Old writers fill only the i8 slot; new ones put 127 there for large codes.
      oc.builtin_code = std::max(deprecated, builtin);
      oc.version = c.scalar<std::int32_t>(f::kCodeVersion, 1, "OperatorCode.version");
      graph_.opcodes.push_back(oc);
    }
  }

  std::vector<bool> read_buffers(const fb::Table& model) {
    std::vector<bool> constant;
    auto buffers = model.vector(f::kModelBuffers, 4, "Model.buffers");
    if (!buffers) return constant;
    for (std::size_t i = 0; i < buffers->size(); ++i) {
      fb::Table b = buffers->table(i);
      bool has_data = false;
      if (auto data = b.vector(f::kBufferData, 1, "Buffer.data")) has_data = data->size() > 0;
      // Large models keep buffer payloads outside the flatbuffer.
      if (b.scalar<std::uint64_t>(f::kBufferOffset, 0, "Buffer.offset") > 1 &&
          b.scalar<std::uint64_t>(f::kBufferSize, 0, "Buffer.size") > 0) {
        has_data = true;
      }
      constant.push_back(has_data);
    }
    return constant;
  }

  void read_subgraph(const fb::Table& sub, const std::vector<bool>& constant) {
    if (auto n = sub.string(f::kSubName, "SubGraph.name")) graph_.subgraph_name = std::string(*n);
    auto tensors = sub.vector(f::kSubTensors, 4, "SubGraph.tensors");
    if (tensors) {
      for (std::size_t i = 0; i < tensors->size(); ++i) {
        graph_.tensors.push_back(read_tensor(tensors->table(i), constant));
      }
    }
    const auto count = static_cast<std::int64_t>(graph_.tensors.size());
    auto check = [&](std::int32_t idx, bool optional_ok, std::size_t pos, const char* what) {
      if ((optional_ok && idx == -1) || (idx >= 0 && idx < count)) return;
      throw MalformedFileError(pos, std::string(what) + " tensor index " +
                                        std::to_string(idx) + " out of range");
    };

    graph_.graph_inputs = int_vector(sub, f::kSubInputs, "SubGraph.inputs");
    graph_.graph_outputs = int_vector(sub, f::kSubOutputs, "SubGraph.outputs");
    for (auto idx : graph_.graph_inputs) check(idx, false, sub.position(), "graph input");
    for (auto idx : graph_.graph_outputs) check(idx, false, sub.position(), "graph output");
    if (graph_.graph_inputs.empty() || graph_.graph_outputs.empty()) {
      throw MalformedFileError(sub.position(), "graph inputs and outputs must be non-empty");
    }

    auto ops = sub.vector(f::kSubOperators, 4, "SubGraph.operators");
    if (!ops) return;
    for (std::size_t i = 0; i < ops->size(); ++i) {
      fb::Table o = ops->table(i);
      auto index = o.scalar<std::uint32_t>(f::kOpIndex, 0, "Operator.opcode_index");
      if (index >= graph_.opcodes.size()) {
        throw MalformedFileError(o.position(), "opcode index " + std::to_string(index) +
                                                   " out of range");
      }
      OperatorInfo info;
      info.opcode = graph_.opcodes[index].builtin_code;
      info.layer_type = layer_type_name(info.opcode);
      info.inputs = int_vector(o, f::kOpInputs, "Operator.inputs");
      info.outputs = int_vector(o, f::kOpOutputs, "Operator.outputs");
      for (auto idx : info.inputs) check(idx, true, o.position(), "operator input");
      for (auto idx : info.outputs) check(idx, false, o.position(), "operator output");
      if (info.outputs.empty()) {
        throw MalformedFileError(o.position(), "operator without outputs");
      }
      graph_.operators.push_back(std::move(info));
    }
  }

  TensorInfo read_tensor(const fb::Table& t, const std::vector<bool>& constant) {
    TensorInfo info;
    info.shape = int_vector(t, f::kTensorShape, "Tensor.shape");
    for (auto& d : info.shape) {
      // Dynamic dimensions (-1) are resolved as 1 for static estimates.
      if (d == -1) d = 1;
      if (d < 0) throw MalformedFileError(t.position(), "negative tensor dimension");
    }
    auto type = t.scalar<std::int8_t>(f::kTensorType, 0, "Tensor.type");
    if (type < 0 || type > static_cast<std::int8_t>(TensorType::kInt4)) {
      throw MalformedFileError(t.position(), "unknown tensor type " + std::to_string(type));
    }
    info.type = static_cast<TensorType>(type);
    info.buffer_index = t.scalar<std::uint32_t>(f::kTensorBuffer, 0, "Tensor.buffer");
    if (info.buffer_index >= constant.size() && !(info.buffer_index == 0 && constant.empty())) {
      throw MalformedFileError(t.position(), "buffer index " +
                                                 std::to_string(info.buffer_index) +
                                                 " out of range");
    }
    info.is_constant = info.buffer_index < constant.size() && constant[info.buffer_index];
    if (auto n = t.string(f::kTensorName, "Tensor.name")) info.name = std::string(*n);
    if (auto q = t.table(f::kTensorQuant, "QuantizationParameters")) {
      TensorQuantization tq;
      if (auto s = q->vector(f::kQuantScale, 4, "Quantization.scale")) {
        for (std::size_t i = 0; i < s->size(); ++i) {
          float v = s->scalar<float>(i);
          if (!(v > 0.0f)) throw MalformedFileError(q->position(), "non-positive scale");
          tq.scales.push_back(v);
        }
      }
      if (auto z = q->vector(f::kQuantZeroPoint, 8, "Quantization.zero_point")) {
        for (std::size_t i = 0; i < z->size(); ++i) tq.zero_points.push_back(z->scalar<std::int64_t>(i));
      }
      if (!tq.scales.empty()) info.quantization = std::move(tq);
    }
    return info;
  }

  fb::Bytes bytes_;
  ModelGraph graph_;
};

}  // namespace

ModelGraph read_model(std::span<const std::uint8_t> bytes) {
  return ModelReader(bytes).read();
}

ModelGraph read_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  return read_model(data);
}

}  // namespace tinykg::model
