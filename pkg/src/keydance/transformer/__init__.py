from .positional import PositionalTable, sinusoidal_pe
from .attention import (
    Mask, causal_mask, full_mask, scaled_dot_attention, MultiHeadAttention, multi_head_attention
)
from .encoder import FeedForward, EncoderLayer, TransformerEncoder, encoder_forward
