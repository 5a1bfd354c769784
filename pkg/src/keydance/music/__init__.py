from .features import assemble_features, musical_beats, DEFAULT_BEAT_THRESHOLD
