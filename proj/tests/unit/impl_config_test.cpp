/* Copyright 2026 The qscope Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <gtest/gtest.h>

#include "qscope/impl_config.hpp"
#include "test_util.hpp"

namespace qscope {
namespace {

Graph small_chain() { return parse_graph(testutil::read_fixture("small_chain.json")); }

TEST(ImplConfig, MatmulExampleHasThreeBindings) {
  const ImplConfig c = parse_impl_config(testutil::read_fixture("matmul_config.yaml"));
  ASSERT_EQ(c.bindings.size(), 3u);
  EXPECT_TRUE(c.defaults.empty());
  EXPECT_EQ(c.bindings.at("Quant_0"), (ImplChoice{Implementation::kThresholds, 8, false, 1}));
  EXPECT_EQ(c.bindings.at("MatMul_0"), (ImplChoice{Implementation::kLut, 8, true, 1}));
  EXPECT_EQ(c.bindings.at("Relu_0").implementation, Implementation::kComparator);
  EXPECT_FALSE(c.bindings.at("Relu_0").bit_width.has_value());
}

TEST(ImplConfig, JsonFormIsAccepted) {
  const ImplConfig c = parse_impl_config(
      R"({"Quant_0": {"implementation": "dyadic", "bit_width": 4, "num_shifts": 2}})");
  EXPECT_EQ(c.bindings.at("Quant_0"), (ImplChoice{Implementation::kDyadic, 4, false, 2}));
}

TEST(ImplConfig, EmptyDocumentWithDefaultsResolvesEveryNode) {
  const ImplConfig c = parse_impl_config(R"(
defaults:
  Conv: {implementation: im2col, bit_width: 8}
  Gemm: {implementation: im2col, bit_width: 8}
  Quant: {implementation: dyadic, bit_width: 8}
)");
  EXPECT_TRUE(c.bindings.empty());
  const BoundConfig b = bind_config(small_chain(), c);
  ASSERT_EQ(b.size(), 5u);
  EXPECT_EQ(b.at("Conv_0").implementation, Implementation::kIm2col);
  EXPECT_EQ(b.at("Quant_1").implementation, Implementation::kDyadic);
  EXPECT_EQ(b.at("Relu_0").implementation, Implementation::kComparator);
}

TEST(ImplConfig, Errors) {
  EXPECT_QSCOPE_ERROR(parse_impl_config("Quant_0:\n  implementation: foo\n"),
                      ErrorCode::kUnknownImplementation);
  EXPECT_QSCOPE_ERROR(parse_impl_config("Quant_0:\n  implementation: lut\n  bit_width: 5\n"),
                      ErrorCode::kInvalidBitWidth);
  EXPECT_QSCOPE_ERROR(parse_impl_config("Quant_0:\n  bit_width: 8\n"), ErrorCode::kSchema);
  EXPECT_QSCOPE_ERROR(parse_impl_config("Quant_0:\n  implementation: lut\n  colour: red\n"),
                      ErrorCode::kSchema);
  EXPECT_QSCOPE_ERROR(parse_impl_config("a: [1, 2"), ErrorCode::kSyntax);
  EXPECT_QSCOPE_ERROR(
      parse_impl_config("Quant_0:\n  implementation: lut\nQuant_0:\n  implementation: dyadic\n"),
      ErrorCode::kSyntax);
  EXPECT_QSCOPE_ERROR(parse_impl_config("defaults:\n  Softmax: {implementation: lut}\n"),
                      ErrorCode::kSchema);
}

TEST(ImplConfig, NullDocumentIsEmpty) {
  EXPECT_EQ(parse_impl_config(""), ImplConfig{});
  EXPECT_EQ(parse_impl_config("...\n"), ImplConfig{});
}

TEST(Bind, SmallChainWithNodeKeyedConfigIsTotal) {
  const ImplConfig c = parse_impl_config(R"(
Conv_0:
  implementation: LUT
  bit_width: 4
Quant_0:
  implementation: thresholds
  bit_width: 8
defaults:
  Gemm: {implementation: gemm, bit_width: 8}
  Quant: {implementation: dyadic}
)");
  const BoundConfig b = bind_config(small_chain(), c);
  ASSERT_EQ(b.size(), 5u);
  EXPECT_EQ(b.at("Conv_0").implementation, Implementation::kLut);
  EXPECT_EQ(b.at("Quant_0").implementation, Implementation::kThresholds);
  EXPECT_EQ(b.at("Quant_1").implementation, Implementation::kDyadic);
  EXPECT_EQ(b.at("Gemm_0").implementation, Implementation::kGemm);
}

TEST(Bind, Errors) {
  EXPECT_QSCOPE_ERROR(bind_config(small_chain(), parse_impl_config("Conv_0: {implementation: thresholds}")),
                      ErrorCode::kIllegalChoice);
  EXPECT_QSCOPE_ERROR(bind_config(small_chain(), parse_impl_config("Conv_0: {implementation: gemm}")),
                      ErrorCode::kIllegalChoice);
  EXPECT_QSCOPE_ERROR(bind_config(small_chain(), parse_impl_config("Nope_3: {implementation: lut}")),
                      ErrorCode::kUnknownNodeId);
  EXPECT_QSCOPE_ERROR(bind_config(small_chain(), parse_impl_config("Conv_0: {implementation: lut}")),
                      ErrorCode::kUnresolved);
}

TEST(Legality, Table) {
  EXPECT_TRUE(is_legal(NodeKind::kConv, Implementation::kIm2col));
  EXPECT_TRUE(is_legal(NodeKind::kMatMul, Implementation::kLut));
  EXPECT_TRUE(is_legal(NodeKind::kQuant, Implementation::kThresholds));
  EXPECT_TRUE(is_legal(NodeKind::kQuant, Implementation::kLut));
  EXPECT_TRUE(is_legal(NodeKind::kMaxPool, Implementation::kComparator));
  EXPECT_FALSE(is_legal(NodeKind::kAct, Implementation::kLut));
  EXPECT_FALSE(is_legal(NodeKind::kQuant, Implementation::kIm2col));
}

}  // namespace
}  // namespace qscope
