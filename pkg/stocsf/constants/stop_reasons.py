REASON_CURVATURE_BLOWUP = "curvature blow-up"
REASON_LENGTH_COLLAPSE = "length collapse"
REASON_LENGTH_EXPLOSION = "length explosion"

STOP_REASONS = {
    REASON_CURVATURE_BLOWUP: "sup |f| exceeded blowup_f_max",
    REASON_LENGTH_COLLAPSE: "L fell to blowup_l_min or below",
    REASON_LENGTH_EXPLOSION: "L reached blowup_l_max",
}
