#pragma once
// Generated by tests/oracles/derive_oracles.py; do not edit by hand.
#include <array>
namespace oracle {
inline constexpr double kMixturePdfK3AtTwo = 0.15747636067966145;
inline constexpr double kStdNormalPeak = 0.3989422804014327;
inline constexpr double kLogStdNormalPeak = -0.9189385332046728;
inline constexpr double kExp075 = 2.117000016612675;
inline constexpr double kExp077 = 2.159766253784915;
inline constexpr double kExp065 = 1.915540829013896;
inline constexpr double kNormalHalfWidthP05N100 = 0.0979982;
inline constexpr double kAcX0N10Center = 0.13876640151302885;
inline constexpr double kAcX0N10Lcb = 0.0;
inline constexpr double kAcX0N10Ucb = 0.3208873092406204;
inline constexpr double kAcX0N10Width = 0.3208873092406204;
inline constexpr double kAcX0N10NTilde = 13.841458881296;
inline constexpr double kWelchT = -0.5773502691896258;
inline constexpr double kWelchP = 0.5889215492858255;
inline constexpr double kWelchDf = 4.959183673469387;
struct IntervalCase {
    unsigned long x, n;
    double z, normal_point, normal_lcb, normal_ucb, ac_point, ac_lcb, ac_ucb;
};
inline constexpr std::array<IntervalCase, 30> kIntervalCases = {{
    IntervalCase{466, 967, 1.7607136400577337, 0.48190279214064113, 0.45361097523439775, 0.5101946090468846, 0.48196062470861945, 0.4537139313063304, 0.5102073181109085},
    IntervalCase{975, 2121, 1.7718858417380416, 0.4596888260254597, 0.4405145333642175, 0.4788631186867019, 0.45974840785995064, 0.4405881055547931, 0.4789087101651081},
    IntervalCase{889, 1656, 2.098947861298731, 0.5368357487922706, 0.5111164150246446, 0.5625550825598965, 0.5367380118789723, 0.5110524501346715, 0.5624235736232731},
    IntervalCase{364, 629, 3.425448099124902, 0.5786963434022258, 0.5112567330648955, 0.646135953739556, 0.5772551848154907, 0.5104051440842091, 0.6441052255467722},
    IntervalCase{2331, 2386, 2.03194040067144, 0.9769488683989941, 0.9707063793678964, 0.9831913574300919, 0.9761249722899202, 0.9697800695611751, 0.9824698750186653},
    IntervalCase{65, 415, 2.4352437529307425, 0.1566265060240964, 0.11317938603310941, 0.20007362601508336, 0.1614642328245567, 0.11778889747297333, 0.2051395681761401},
    IntervalCase{2049, 4810, 0.879433130482883, 0.425987525987526, 0.4197172105309383, 0.4322578414441137, 0.425999424582063, 0.4197295905896675, 0.4322692585744585},
    IntervalCase{2535, 4220, 2.2610467230167375, 0.6007109004739336, 0.5836646135262686, 0.6177571874215987, 0.6005890415628993, 0.5835521995206021, 0.6176258836051964},
    IntervalCase{619, 4541, 3.134718758099673, 0.13631358731556925, 0.12035220687930961, 0.1522749677518289, 0.13709888436707546, 0.12111615590902218, 0.15308161282512872},
    IntervalCase{1064, 3028, 0.637905673982939, 0.3513870541611625, 0.34585273482797485, 0.3569213734943501, 0.35140702311636535, 0.3458730035642137, 0.35694104266851706},
    IntervalCase{4615, 4757, 3.0862896489229388, 0.9701492537313433, 0.962534305065347, 0.9777642023973395, 0.9692097311480872, 0.9614873477452163, 0.9769321145509581},
    IntervalCase{206, 3786, 2.253217961533348, 0.054410987849973586, 0.04610469165451946, 0.06271728404542772, 0.055007718407232724, 0.04666422650215138, 0.06335121031231407},
    IntervalCase{1077, 3904, 1.418217805139482, 0.27587090163934425, 0.2657259734820851, 0.2860158297966034, 0.27598631354470526, 0.2658426848354646, 0.28612994225394595},
    IntervalCase{272, 720, 0.9119065305171273, 0.37777777777777777, 0.36130089544589217, 0.3942546601096634, 0.3779187771004185, 0.361450195086798, 0.394387359114039},
    IntervalCase{2800, 4895, 1.716207689229517, 0.5720122574055159, 0.5598752440859714, 0.5841492707250602, 0.5719689529905921, 0.5598354349955879, 0.5841024709855965},
    IntervalCase{212, 447, 2.4159729548798228, 0.4742729306487696, 0.41721281530059795, 0.5313330459969412, 0.4746045444683951, 0.4179114380664976, 0.5312976508702927},
    IntervalCase{598, 2384, 2.4006179410720487, 0.25083892617449666, 0.2295254155328087, 0.27215243681618456, 0.2514397836408813, 0.23013505522873565, 0.27274451205302697},
    IntervalCase{257, 872, 1.4405887297936495, 0.2947247706422018, 0.272482997593009, 0.3169665436913947, 0.29521215066710615, 0.2729861200481496, 0.3174381812860627},
    IntervalCase{16, 147, 1.1232125660947245, 0.10884353741496598, 0.07999116092615757, 0.1376959139037744, 0.11217201560428955, 0.08306120628467105, 0.14128282492390803},
    IntervalCase{2481, 3098, 1.7441144094376084, 0.8008392511297612, 0.7883248862310156, 0.8133536160285068, 0.8005441459720208, 0.7880289634645349, 0.8130593284795067},
    IntervalCase{1608, 4391, 3.307261205879006, 0.36620359826918697, 0.3421586987608726, 0.3902484977775013, 0.3665360568204602, 0.3425164530623617, 0.3905556605785587},
    IntervalCase{436, 762, 3.2789176660381822, 0.5721784776902887, 0.5134092343339002, 0.6309477210466773, 0.5711742573898076, 0.512798117200348, 0.6295503975792675},
    IntervalCase{1103, 1868, 2.514480953949649, 0.5904710920770878, 0.5618621685827554, 0.6190800155714202, 0.5901659077767615, 0.561602022636821, 0.618729792916702},
    IntervalCase{1580, 2271, 3.019706787642658, 0.6957287538529282, 0.6665741838121672, 0.7248833238936893, 0.6949459972522132, 0.665828774653784, 0.7240632198506424},
    IntervalCase{3363, 4007, 2.852425958944224, 0.839281257798852, 0.8227314965144055, 0.8558310190832985, 0.8385937330541371, 0.822032211474313, 0.8551552546339612},
    IntervalCase{721, 3167, 0.9537764131746761, 0.22766024628986423, 0.22055350768512408, 0.23476698489460437, 0.22773845072876953, 0.22063187204409224, 0.2348450294134468},
    IntervalCase{2250, 2696, 3.0152108009250873, 0.8345697329376854, 0.8129924609123801, 0.8561470049629908, 0.8334452831912549, 0.8118457823265528, 0.8550447840559571},
    IntervalCase{1039, 3383, 3.3647782593861333, 0.3071238545669524, 0.280437452188573, 0.3338102569453318, 0.30776719139282227, 0.28110982771164017, 0.3344245550740043},
    IntervalCase{866, 2813, 1.0552763056889805, 0.3078563810878066, 0.29867192355338673, 0.3170408386222265, 0.3079324166416612, 0.2987491470798099, 0.3171156862035125},
    IntervalCase{2077, 4269, 1.0418738948882607, 0.48653080346685407, 0.47856069104249793, 0.4945009158912102, 0.48653422748006614, 0.47856512669285306, 0.4945033282672792},
}};
}  // namespace oracle
