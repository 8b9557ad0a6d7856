#pragma once

#include <string>
#include <vector>

#include "smtmc/parser.hpp"
#include "smtmc/validate.hpp"

namespace smtmc {

// Built-in desk-scale corpus: 1-3 variables of widths 2-8 mixing arithmetic,
// bitwise structure, slicing and comparisons. Every formula fits comfortably
// under the exhaustive-count guard so the quality suite can compare against
// brute force.
inline std::vector<CorpusEntry> desk_corpus() {
    static const std::pair<const char*, const char*> sources[] = {
        // exact-path formulas (at most a handful of models)
        {"point_w8", "(declare-fun x () (_ BitVec 8)) (assert (= x #x03))"},
        {"unsat_w4", "(declare-fun x () (_ BitVec 4)) (assert (bvult x #x0))"},
        {"pair_or_w4", "(declare-fun x () (_ BitVec 4)) (assert (or (= x #x2) (= x #x9)))"},
        {"low3_w6", "(declare-fun x () (_ BitVec 6)) (assert (bvult x #b000011))"},
        {"corners_w2", "(declare-fun x () (_ BitVec 2)) (declare-fun y () (_ BitVec 2))"
                       " (assert (and (bvult x #b10) (bvult y #b10)))"},
        // single variable, small widths
        {"cube_w4", "(declare-fun x () (_ BitVec 4)) (assert true)"},
        {"half_w6", "(declare-fun x () (_ BitVec 6)) (assert (bvult x #b100000))"},
        {"not_range_w5", "(declare-fun x () (_ BitVec 5)) (assert (bvult (bvnot x) #b01000))"},
        {"window_w7", "(declare-fun x () (_ BitVec 7))"
                      " (assert (and (bvuge x #b0010100) (bvult x #b1000001)))"},
        {"urem7_w8", "(declare-fun x () (_ BitVec 8)) (assert (= (bvurem x #x07) #x03))"},
        {"or_fix_w8", "(declare-fun x () (_ BitVec 8)) (assert (= (bvor x #xf0) #xf5))"},
        {"extract_mid_w8", "(declare-fun x () (_ BitVec 8))"
                           " (assert (= ((_ extract 5 2) x) #b1001))"},
        {"parity_w6", "(declare-fun x () (_ BitVec 6))"
                      " (assert (= (bvxor ((_ extract 0 0) x) ((_ extract 1 1) x)"
                      " ((_ extract 2 2) x) ((_ extract 3 3) x) ((_ extract 4 4) x)"
                      " ((_ extract 5 5) x)) #b1))"},
        // two variables
        {"add_wrap_w4", "(declare-fun x () (_ BitVec 4)) (declare-fun y () (_ BitVec 4))"
                        " (assert (= (bvadd x y) #x1))"},
        {"ult_sum_w4", "(declare-fun x () (_ BitVec 4)) (declare-fun y () (_ BitVec 4))"
                       " (assert (bvult (bvadd x y) #x8))"},
        {"mul_zero_w4", "(declare-fun x () (_ BitVec 4)) (declare-fun y () (_ BitVec 4))"
                        " (assert (= (bvmul x y) #x0))"},
        {"le_chain_w4", "(declare-fun x () (_ BitVec 4)) (declare-fun y () (_ BitVec 4))"
                        " (assert (bvule x y))"},
        {"concat_w44", "(declare-fun x () (_ BitVec 4)) (declare-fun y () (_ BitVec 4))"
                       " (assert (bvult (concat x y) #x3c))"},
        {"ite_gate_w4", "(declare-fun x () (_ BitVec 4)) (declare-fun y () (_ BitVec 4))"
                        " (assert (ite (bvult x #x8) (= y #x2) (bvult y #x4)))"},
        {"true_w66", "(declare-fun x () (_ BitVec 6)) (declare-fun y () (_ BitVec 6))"
                     " (assert true)"},
        {"even_sum_w6", "(declare-fun x () (_ BitVec 6)) (declare-fun y () (_ BitVec 6))"
                        " (assert (= (bvand (bvadd x y) #b000001) #b000000))"},
        {"subset_w6", "(declare-fun x () (_ BitVec 6)) (declare-fun y () (_ BitVec 6))"
                      " (assert (= (bvand x y) x))"},
        {"eqlow_w6", "(declare-fun x () (_ BitVec 6)) (declare-fun y () (_ BitVec 6))"
                     " (assert (= ((_ extract 2 0) x) ((_ extract 2 0) y)))"},
        {"affine_w5", "(declare-fun x () (_ BitVec 5)) (declare-fun y () (_ BitVec 5))"
                      " (assert (= (bvadd (bvmul #b00011 x) #b00111) y))"},
        {"mixed_w36", "(declare-fun x () (_ BitVec 3)) (declare-fun y () (_ BitVec 6))"
                      " (assert (bvule x ((_ extract 2 0) y)))"},
        {"mul_eq_w6", "(declare-fun x () (_ BitVec 6)) (declare-fun y () (_ BitVec 6))"
                      " (assert (= (bvmul x y) #b001100))"},
        // three variables
        {"all_w2", "(declare-fun x () (_ BitVec 2)) (declare-fun y () (_ BitVec 2))"
                   " (declare-fun z () (_ BitVec 2)) (assert true)"},
        {"sum3_w4", "(declare-fun x () (_ BitVec 4)) (declare-fun y () (_ BitVec 4))"
                    " (declare-fun z () (_ BitVec 4)) (assert (= (bvadd x y z) #x0))"},
        {"ult3_w4", "(declare-fun x () (_ BitVec 4)) (declare-fun y () (_ BitVec 4))"
                    " (declare-fun z () (_ BitVec 4)) (assert (bvult (bvadd x y) z))"},
        {"maj_w3", "(declare-fun x () (_ BitVec 3)) (declare-fun y () (_ BitVec 3))"
                   " (declare-fun z () (_ BitVec 3))"
                   " (assert (or (and (bvule x y) (bvule y z)) (and (bvule z y) (bvule y x))))"},
    };
    std::vector<CorpusEntry> corpus;
    for (const auto& [id, text] : sources) corpus.push_back(CorpusEntry{id, parse_smt2(text)});
    return corpus;
}

}  // namespace smtmc
