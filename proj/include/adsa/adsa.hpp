// adsa.hpp
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "adsa/ads_automaton.hpp"
#include "adsa/ads_constructions.hpp"
#include "adsa/ads_io.hpp"
#include "adsa/alphabet.hpp"
#include "adsa/axiom_fuzz.hpp"
#include "adsa/error.hpp"
#include "adsa/fst.hpp"
#include "adsa/fst_io.hpp"
#include "adsa/logtm.hpp"
#include "adsa/nfa.hpp"
#include "adsa/nfa_io.hpp"
#include "adsa/nrr.hpp"
#include "adsa/oracles.hpp"
#include "adsa/protocol.hpp"
#include "adsa/reductions.hpp"
#include "adsa/universality.hpp"
#include "adsa/verdict.hpp"
