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

#include "qscope/cost_model.hpp"
#include "test_util.hpp"

namespace qscope {
namespace {

ConvAttrs conv3x3() {
  return {.c_in = 3, .c_out = 8, .k_h = 3, .k_w = 3, .h_in = 6, .w_in = 6, .h_out = 4, .w_out = 4};
}

TEST(ConvCosts, Im2col) {
  auto r = conv_costs(conv3x3(), 8, 8, 32, Implementation::kIm2col);
  EXPECT_EQ(r.memory.input_bits, 3456);
  EXPECT_EQ(r.memory.param_bits, 1984);
  EXPECT_EQ(r.memory.output_bits, 4096);
  EXPECT_EQ(r.memory.temp_bits, 0);
  EXPECT_EQ(r.costs.macs_per_pixel, 216);
  EXPECT_EQ(r.costs.macs, 3456);
  EXPECT_EQ(r.costs.bops, 169344);
  EXPECT_EQ(r.memory.input_bytes(), 432);
  EXPECT_EQ(r.memory.param_bytes(), 248);
  EXPECT_EQ(r.memory.output_bytes(), 512);
}

TEST(ConvCosts, Lut) {
  auto r = conv_costs(conv3x3(), 4, 4, 16, Implementation::kLut);
  EXPECT_EQ(r.costs.macs, 0);
  EXPECT_EQ(r.costs.macs_per_pixel, 0);
  EXPECT_EQ(r.memory.temp_bits, 4096);  // 2^(4+4) * 16
  EXPECT_EQ(r.costs.bops, 3456 * (1 + 16 + 4 + 4));
}

TEST(ConvCosts, UnitAndDepthwise) {
  ConvAttrs one{};
  auto r = conv_costs(one, 8, 8, 32, Implementation::kIm2col);
  EXPECT_EQ(r.costs.macs, 1);
  EXPECT_EQ(r.costs.bops, 49);
  EXPECT_EQ(r.memory.param_bits, 40);

  ConvAttrs dw{.c_in = 4, .c_out = 4, .k_h = 3, .k_w = 3, .h_in = 4, .w_in = 4,
               .h_out = 4, .w_out = 4, .padding = 1, .depthwise = true};
  r = conv_costs(dw, 8, 8, 32, Implementation::kIm2col);
  EXPECT_EQ(r.costs.macs_per_pixel, 4 * 9);
  EXPECT_EQ(r.costs.macs, 16 * 36);
  EXPECT_EQ(r.memory.param_bits, 36 * 8 + 4 * 32);
}

TEST(ConvCosts, LutWidthCap) {
  EXPECT_QSCOPE_ERROR(conv_costs(conv3x3(), 16, 8, 32, Implementation::kLut),
                      ErrorCode::kWidthOverflow);
  EXPECT_QSCOPE_ERROR(conv_costs(conv3x3(), 8, 8, 32, Implementation::kThresholds),
                      ErrorCode::kIllegalChoice);
}

TEST(GemmCosts, Examples) {
  auto r = gemm_costs(10, 4, 8, 8, 32, Implementation::kGemm);
  EXPECT_EQ(r.costs.macs, 40);
  EXPECT_EQ(r.memory.param_bits, 448);
  EXPECT_EQ(gemm_costs(1, 1, 8, 8, 32, Implementation::kIm2col).costs.macs, 1);
  r = gemm_costs(10, 4, 2, 2, 16, Implementation::kLut);
  EXPECT_EQ(r.memory.temp_bits, 256);
  EXPECT_EQ(r.costs.macs, 0);
}

TEST(QuantCosts, Examples) {
  auto r = quant_costs(100, 1, 32, 4, {Implementation::kThresholds});
  EXPECT_EQ(r.memory.param_bits, 480);
  EXPECT_EQ(r.costs.bops, 12800);

  r = quant_costs(100, 1, 32, 8, {Implementation::kDyadic, std::nullopt, false, 1});
  EXPECT_EQ(r.costs.bops, 100);
  EXPECT_EQ(r.memory.param_bits, 32);

  r = quant_costs(100, 1, 8, 4, {Implementation::kLut});
  EXPECT_EQ(r.memory.param_bits, 1024);

  // Channel-wise thresholds scale with the channel count.
  r = quant_costs(100, 8, 32, 4, {Implementation::kThresholds, std::nullopt, true, 1});
  EXPECT_EQ(r.memory.param_bits, 8 * 480);
  r = quant_costs(100, 8, 32, 8, {Implementation::kDyadic, std::nullopt, true, 3});
  EXPECT_EQ(r.memory.param_bits, 8 * 32);
  EXPECT_EQ(r.costs.bops, 300);
  EXPECT_EQ(quant_structure_bits(1, 32, 4, {Implementation::kThresholds}), 480);
  EXPECT_EQ(quant_structure_bits(1, 32, 4, {Implementation::kDyadic}), 0);
}

TEST(ActPoolCosts, Examples) {
  EXPECT_EQ(act_costs(64, 8).bops, 576);
  EXPECT_EQ(act_costs(1, 2).bops, 3);
  EXPECT_QSCOPE_ERROR(act_costs(0, 8), ErrorCode::kInvariantViolation);
  EXPECT_EQ(pool_costs(64, 8, 2, 2).bops, 2048);
  EXPECT_EQ(pool_costs(64, 8, 1, 1).bops, 512);
  EXPECT_EQ(pool_costs(16, 4, 3, 3).bops, 576);
  EXPECT_EQ(pool_costs(16, 4, 3, 3).macs, 0);
}

BoundConfig bind_file(const Graph& g, const std::string& cfg) {
  return bind_config(g, parse_impl_config(testutil::read_fixture(cfg)));
}

TEST(Decorate, SmallChainHasTwoMacNodes) {
  const Graph g = parse_graph(testutil::read_fixture("small_chain.json"));
  const auto dg = decorate(g, bind_file(g, "small_chain_defaults.yaml"));
  ASSERT_EQ(dg.nodes.size(), 5u);
  int with_macs = 0;
  for (const auto& n : dg.nodes) with_macs += n.costs.macs > 0 ? 1 : 0;
  EXPECT_EQ(with_macs, 2);
  const auto* conv = dg.find("Conv_0");
  ASSERT_NE(conv, nullptr);
  EXPECT_EQ(conv->lowered_kind, NodeKind::kMatMul);
  EXPECT_EQ(conv->costs.macs, 3456);
  EXPECT_EQ(dg.find("Gemm_0")->costs.macs, 1280);
  EXPECT_EQ(dg.find("Relu_0")->costs.bops, 128 * 9);
}

TEST(Decorate, WidthsPropagate) {
  const Graph g = parse_graph(testutil::read_fixture("small_chain.json"));
  const auto cfg = parse_impl_config(R"(
Quant_0: {implementation: thresholds, bit_width: 4}
defaults:
  Conv: {implementation: im2col, bit_width: 8}
  Gemm: {implementation: lut, bit_width: 2}
  Quant: {implementation: dyadic}
)");
  const auto dg = decorate(g, bind_config(g, cfg));
  const auto* gemm = dg.find("Gemm_0");
  EXPECT_EQ(gemm->widths.input, 4);  // Quant_0 output through Relu_0
  EXPECT_EQ(gemm->widths.weight, 2);
  EXPECT_EQ(gemm->memory.temp_bits, (1 << 6) * 32);
  EXPECT_EQ(dg.find("Quant_0")->memory.param_bits, 15 * 32);
  EXPECT_EQ(dg.find("Relu_0")->costs.bops, 128 * 5);
}

TEST(Decorate, Case2LutBlocksHaveNoMacs) {
  const Graph g = parse_graph(testutil::read_fixture("mobilenet_v1_32.json"));
  const auto dg = decorate(g, bind_file(g, "case2.yaml"));
  for (int b = 8; b <= 10; ++b) {
    for (const char* part : {"_dw", "_pw"}) {
      const auto* n = dg.find("b" + std::to_string(b) + part);
      ASSERT_NE(n, nullptr);
      EXPECT_EQ(n->costs.macs, 0) << n->id;
      EXPECT_GT(n->memory.temp_bits, 0) << n->id;
    }
  }
  EXPECT_GT(dg.find("b7_pw")->costs.macs, 0);
}

TEST(Decorate, EmptyGraph) {
  const auto dg = decorate(Graph{}, {});
  EXPECT_TRUE(dg.nodes.empty());
}

TEST(Decorate, ReportsCarryEveryNode) {
  const Graph g = parse_graph(testutil::read_fixture("matmul_graph.json"));
  const auto dg = decorate(g, bind_file(g, "matmul_config.yaml"));
  const auto csv = decorated_to_csv(dg);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(decorated_to_json(dg).find("\"thresholds\""), std::string::npos);
  EXPECT_EQ(dg.find("MatMul_0")->memory.temp_bits, (1 << 16) * 32);
}

}  // namespace
}  // namespace qscope
