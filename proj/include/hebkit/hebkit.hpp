#pragma once

#include "hebkit/cleaner.hpp"
#include "hebkit/jsonl.hpp"
#include "hebkit/match_trie.hpp"
#include "hebkit/metrics.hpp"
#include "hebkit/mlm.hpp"
#include "hebkit/morph.hpp"
#include "hebkit/parallel.hpp"
#include "hebkit/pretokenizer.hpp"
#include "hebkit/proclitic.hpp"
#include "hebkit/rng.hpp"
#include "hebkit/tokenize.hpp"
#include "hebkit/trainer.hpp"
#include "hebkit/unicode.hpp"
#include "hebkit/vocab.hpp"
