// Generated by tests/oracle/gen_oracles.py (mpmath, 50 digits). Do not edit.

#![allow(clippy::excessive_precision)]

/// (t, theta(t), theta'(t))
pub const THETA: &[(f64, f64, f64)] = &[
    (1.0, -1.767547952812290388302216, -1.012573096551733600148271),
    (5.0, -3.459620375363462533185467, -0.1150591091227988686315015),
    (10.0, -3.067074396289895291702014, 0.2321453134324651406394305),
    (20.0, 1.186894808444484044812757, 0.5788754974224167999352671),
    (50.0, 26.46136607016140964745495, 1.037064635592610552033941),
    (100.0, 87.97216523178721962548313, 1.383644476419579353241236),
    (1000.0, 2034.546428038031608703345, 2.534939085453058805078069),
    (
        12345.67799999999988358468,
        40636.54381533035401422115,
        3.791592127304555719194547,
    ),
    (100000.0, 433752.0272291707814356446, 4.837524199278358134931279),
    (1000000.0, 5488816.353078403444882823, 5.988816745777443476940311),
];

/// (t, Z(t))
pub const Z: &[(f64, f64)] = &[
    (10.0, -1.549194546181022389085217),
    (14.0, -0.1056262677798826101389108),
    (17.5, 2.301845755335056883280502),
    (20.0, 1.147842412185197277635034),
    (25.0, -0.01487248389797099820581667),
    (29.89999999999999857891453, 0.7442761266956610499567932),
    (30.10000000000000142108547, 0.4498010752335177590253063),
    (35.0, 2.82647861132742248096064),
    (50.0, -0.3407350059550249827533166),
    (77.70000000000000284217094, -0.8436451260500329223642315),
    (100.0, 2.69269705666446347499538),
    (250.25, -1.210118497192137833545647),
    (500.0, 1.472447851055085272663985),
    (1000.0, 0.9977946375215866139860027),
    (2024.5, -0.06384775263195098885343472),
    (5000.0, -0.804257236352939849581298),
    (10000.0, -0.3413947242312085591768904),
    (12345.67799999999988358468, -0.8785615993468147896483715),
    (50000.0, 2.970043337302320360965678),
    (100000.0, 5.879592468681765041546472),
    (333333.2999999999883584678, 0.2800583177820033565615248),
    (1000000.0, -2.806133878430698478689004),
];

/// Ordinates of the first 40 zeros on the critical line.
pub const ZEROS: &[f64] = &[
    14.13472514173469379,
    21.022039638771554993,
    25.010857580145688763,
    30.42487612585951321,
    32.935061587739189691,
    37.586178158825671257,
    40.918719012147495187,
    43.327073280914999519,
    48.005150881167159728,
    49.773832477672302182,
    52.970321477714460644,
    56.446247697063394804,
    59.34704400260235308,
    60.831778524609809844,
    65.112544048081606661,
    67.079810529494173714,
    69.546401711173979253,
    72.067157674481907583,
    75.704690699083933168,
    77.144840068874805373,
    79.337375020249367923,
    82.910380854086030183,
    84.735492980517050106,
    87.425274613125229407,
    88.809111207634465424,
    92.491899270558484296,
    94.651344040519886967,
    95.870634228245309759,
    98.831194218193692233,
    101.31785100573139123,
    103.72553804047833942,
    105.44662305232609449,
    107.16861118427640752,
    111.02953554316967452,
    111.87465917699263709,
    114.32022091545271277,
    116.22668032085755438,
    118.79078286597621732,
    121.37012500242064592,
    122.9468292935525882,
];

/// Ordinates of the zeros in (10000, 10030).
pub const ZEROS_NEAR_1E4: &[f64] = &[
    10000.065345414535315,
    10000.651847323767905,
    10000.918178955611726,
    10002.279122272888615,
    10002.980327512225125,
    10004.047053828169043,
    10004.679404166065233,
    10005.310331727640565,
    10006.052756874654158,
    10007.372875972386685,
    10008.03424524281442,
    10009.099264723476663,
    10010.396260197881285,
    10010.859145158247397,
    10011.551642882458108,
    10012.098374860015373,
    10013.033066685102661,
    10013.836810490506861,
    10015.055397413913231,
    10015.610960152243986,
    10016.655508660675646,
    10017.82860685467712,
    10018.38073187774271,
    10019.12115246578039,
    10020.331251606162617,
    10020.810492183285505,
    10021.883178542296504,
    10022.591974839763474,
    10023.327690618392217,
    10024.066739639992133,
    10024.538095541741359,
    10026.53338954002287,
    10027.334815708810036,
    10027.693447874715339,
    10028.612492024521357,
    10029.431275334806623,
];

pub const ZERO_COUNT_TO_1E4: u64 = 10142;

pub const BALA_COEFF: f64 = -1.683445736606279762348;
pub const SHORT_COEFF: f64 = -0.6834457366062797623476;
pub const S_SUM_1E4_U3: f64 = 2.168373548634139674728;
pub const S_SUM_1E4_U0: f64 = 0.01498148257096819911546;
pub const HL_MAIN_1E4: f64 = 0.01493520854877478083804;
