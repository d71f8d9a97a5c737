#pragma once

// Umbrella header: the whole toolkit except fetch.hpp, which drags in the
// HTTP client (and TLS) and is only wanted by code that actually scrapes.

#include "probtag/activations.hpp"
#include "probtag/config.hpp"
#include "probtag/corpus_csv.hpp"
#include "probtag/errors.hpp"
#include "probtag/gru.hpp"
#include "probtag/html.hpp"
#include "probtag/init.hpp"
#include "probtag/layers.hpp"
#include "probtag/lstm.hpp"
#include "probtag/model.hpp"
#include "probtag/pages.hpp"
#include "probtag/rmsprop.hpp"
#include "probtag/rng.hpp"
#include "probtag/serialize.hpp"
#include "probtag/tensor.hpp"
#include "probtag/text.hpp"
#include "probtag/train.hpp"
#include "probtag/vocab.hpp"
