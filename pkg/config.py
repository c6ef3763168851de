"""
RegCut - Configuration du banc d'essai max-cut v1.0
===================================================
Charge les parametres depuis .env (via python-dotenv) avec valeurs par defaut.
"""

import os
from pathlib import Path

# ── Charger .env si present ──
try:
    from dotenv import load_dotenv
    env_path = Path(__file__).parent / ".env"
    load_dotenv(dotenv_path=env_path)
except ImportError:
    pass  # python-dotenv optionnel, on utilise les valeurs par defaut

# ══════════════════════════════════════
# GENERATION DES GRAPHES
# ══════════════════════════════════════
# auto          : rejet complet pour d <= 5, re-appariement des demi-aretes au-dela
# configuration : rejet complet uniquement
# stub_repair   : re-appariement uniquement
GRAPH_SAMPLER = os.getenv("GRAPH_SAMPLER", "auto")
GRAPH_MAX_RESTARTS = int(os.getenv("GRAPH_MAX_RESTARTS", "10000"))
GRAPH_REPAIR_MAX_DEGREE = int(os.getenv("GRAPH_REPAIR_MAX_DEGREE", "5"))

# ══════════════════════════════════════
# EXTREMAL OPTIMIZATION
# ══════════════════════════════════════
EO_TAU = float(os.getenv("EO_TAU", "1.4"))
EO_TMAX_FACTOR = int(os.getenv("EO_TMAX_FACTOR", "10000"))  # t_max = facteur * n
EO_RESTARTS = int(os.getenv("EO_RESTARTS", "2"))
EO_STUDY_RUNS = int(os.getenv("EO_STUDY_RUNS", "20"))

# ══════════════════════════════════════
# RELAXATION SDP (GOEMANS-WILLIAMSON)
# ══════════════════════════════════════
SDP_MAX_SWEEPS = int(os.getenv("SDP_MAX_SWEEPS", "2000"))
SDP_TOLERANCE = float(os.getenv("SDP_TOLERANCE", "1e-8"))
SDP_ROUNDING_TRIALS = int(os.getenv("SDP_ROUNDING_TRIALS", "500"))
SDP_RANK = int(os.getenv("SDP_RANK", "0"))  # 0 = min(n, ceil(sqrt(2n)))

# ══════════════════════════════════════
# RESEAU LGNN
# ══════════════════════════════════════
GNN_LAYERS = int(os.getenv("GNN_LAYERS", "30"))
GNN_HOPS = int(os.getenv("GNN_HOPS", "3"))
GNN_WIDTH = int(os.getenv("GNN_WIDTH", "10"))
GNN_TRAIN_GRAPHS = int(os.getenv("GNN_TRAIN_GRAPHS", "5000"))
GNN_PG_SAMPLES = int(os.getenv("GNN_PG_SAMPLES", "10"))
GNN_LEARNING_RATE = float(os.getenv("GNN_LEARNING_RATE", "1e-3"))
GNN_EPOCHS = int(os.getenv("GNN_EPOCHS", "1"))
GNN_BATCH_SIZE = int(os.getenv("GNN_BATCH_SIZE", "1"))
GNN_LR_DECAY = float(os.getenv("GNN_LR_DECAY", "1.0"))  # 1.0 = pas de decroissance
GNN_DECAY_EVERY = int(os.getenv("GNN_DECAY_EVERY", "1000"))
GNN_PG_BASELINE = os.getenv("GNN_PG_BASELINE", "false").lower() == "true"
GNN_DEGREE_TERM = os.getenv("GNN_DEGREE_TERM", "false").lower() == "true"
GNN_NORMALIZE = os.getenv("GNN_NORMALIZE", "true").lower() == "true"

# ══════════════════════════════════════
# HARNAIS D'EXPERIENCES
# ══════════════════════════════════════
REGCUT_THREADS = max(1, int(os.getenv("REGCUT_THREADS", "1")))
DEFAULT_MASTER_SEED = int(os.getenv("DEFAULT_MASTER_SEED", "20190101"))
DEFAULT_GRAPH_COUNT = int(os.getenv("DEFAULT_GRAPH_COUNT", "50"))

# ══════════════════════════════════════
# SORTIE & JOURNALISATION
# ══════════════════════════════════════
OUTPUT_DIR = os.getenv("OUTPUT_DIR", "outputs")
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
