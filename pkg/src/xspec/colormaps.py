"""Perceptually uniform 256-entry colormap tables (magma, viridis), RGB in [0, 1]."""

import numpy as np

MAGMA = np.array([
    [0.00146200, 0.00046600, 0.01386600],
    [0.00225800, 0.00129500, 0.01833100],
    [0.00327900, 0.00230500, 0.02370800],
    [0.00451200, 0.00349000, 0.02996500],
    [0.00595000, 0.00484300, 0.03713000],
    [0.00758800, 0.00635600, 0.04497300],
    [0.00942600, 0.00802200, 0.05284400],
    [0.01146500, 0.00982800, 0.06075000],
    [0.01370800, 0.01177100, 0.06866700],
    [0.01615600, 0.01384000, 0.07660300],
    [0.01881500, 0.01602600, 0.08458400],
    [0.02169200, 0.01832000, 0.09261000],
    [0.02479200, 0.02071500, 0.10067600],
    [0.02812300, 0.02320100, 0.10878700],
    [0.03169600, 0.02576500, 0.11696500],
    [0.03552000, 0.02839700, 0.12520900],
    [0.03960800, 0.03109000, 0.13351500],
    [0.04383000, 0.03383000, 0.14188600],
    [0.04806200, 0.03660700, 0.15032700],
    [0.05232000, 0.03940700, 0.15884100],
    [0.05661500, 0.04216000, 0.16744600],
    [0.06094900, 0.04479400, 0.17612900],
    [0.06533000, 0.04731800, 0.18489200],
    [0.06976400, 0.04972600, 0.19373500],
    [0.07425700, 0.05201700, 0.20266000],
    [0.07881500, 0.05418400, 0.21166700],
    [0.08344600, 0.05622500, 0.22075500],
    [0.08815500, 0.05813300, 0.22992200],
    [0.09294900, 0.05990400, 0.23916400],
    [0.09783300, 0.06153100, 0.24847700],
    [0.10281500, 0.06301000, 0.25785400],
    [0.10789900, 0.06433500, 0.26728900],
    [0.11309400, 0.06549200, 0.27678400],
    [0.11840500, 0.06647900, 0.28632100],
    [0.12383300, 0.06729500, 0.29587900],
    [0.12938000, 0.06793500, 0.30544300],
    [0.13505300, 0.06839100, 0.31500000],
    [0.14085800, 0.06865400, 0.32453800],
    [0.14678500, 0.06873800, 0.33401100],
    [0.15283900, 0.06863700, 0.34340400],
    [0.15901800, 0.06835400, 0.35268800],
    [0.16530800, 0.06791100, 0.36181600],
    [0.17171300, 0.06730500, 0.37077100],
    [0.17821200, 0.06657600, 0.37949700],
    [0.18480100, 0.06573200, 0.38797300],
    [0.19146000, 0.06481800, 0.39615200],
    [0.19817700, 0.06386200, 0.40400900],
    [0.20493500, 0.06290700, 0.41151400],
    [0.21171800, 0.06199200, 0.41864700],
    [0.21851200, 0.06115800, 0.42539200],
    [0.22530200, 0.06044500, 0.43174200],
    [0.23207700, 0.05988900, 0.43769500],
    [0.23882600, 0.05951700, 0.44325600],
    [0.24554300, 0.05935200, 0.44843600],
    [0.25222000, 0.05941500, 0.45324800],
    [0.25885700, 0.05970600, 0.45771000],
    [0.26544700, 0.06023700, 0.46184000],
    [0.27199400, 0.06099400, 0.46566000],
    [0.27849300, 0.06197800, 0.46919000],
    [0.28495100, 0.06316800, 0.47245100],
    [0.29136600, 0.06455300, 0.47546200],
    [0.29774000, 0.06611700, 0.47824300],
    [0.30408100, 0.06783500, 0.48081200],
    [0.31038200, 0.06970200, 0.48318600],
    [0.31665400, 0.07169000, 0.48538000],
    [0.32289900, 0.07378200, 0.48740800],
    [0.32911400, 0.07597200, 0.48928700],
    [0.33530800, 0.07823600, 0.49102400],
    [0.34148200, 0.08056400, 0.49263100],
    [0.34763600, 0.08294600, 0.49412100],
    [0.35377300, 0.08537300, 0.49550100],
    [0.35989800, 0.08783100, 0.49677800],
    [0.36601200, 0.09031400, 0.49796000],
    [0.37211600, 0.09281600, 0.49905300],
    [0.37821100, 0.09533200, 0.50006700],
    [0.38429900, 0.09785500, 0.50100200],
    [0.39038400, 0.10037900, 0.50186400],
    [0.39646700, 0.10290200, 0.50265800],
    [0.40254800, 0.10542000, 0.50338600],
    [0.40862900, 0.10793000, 0.50405200],
    [0.41470900, 0.11043100, 0.50466200],
    [0.42079100, 0.11292000, 0.50521500],
    [0.42687700, 0.11539500, 0.50571400],
    [0.43296700, 0.11785500, 0.50616000],
    [0.43906200, 0.12029800, 0.50655500],
    [0.44516300, 0.12272400, 0.50690100],
    [0.45127100, 0.12513200, 0.50719800],
    [0.45738600, 0.12752200, 0.50744800],
    [0.46350800, 0.12989300, 0.50765200],
    [0.46964000, 0.13224500, 0.50780900],
    [0.47578000, 0.13457700, 0.50792100],
    [0.48192900, 0.13689100, 0.50798900],
    [0.48808800, 0.13918600, 0.50801100],
    [0.49425800, 0.14146200, 0.50798800],
    [0.50043800, 0.14371900, 0.50792000],
    [0.50662900, 0.14595800, 0.50780600],
    [0.51283100, 0.14817900, 0.50764800],
    [0.51904500, 0.15038300, 0.50744300],
    [0.52527000, 0.15256900, 0.50719200],
    [0.53150700, 0.15473900, 0.50689500],
    [0.53775500, 0.15689400, 0.50655100],
    [0.54401500, 0.15903300, 0.50615900],
    [0.55028700, 0.16115800, 0.50571900],
    [0.55657100, 0.16326900, 0.50523000],
    [0.56286600, 0.16536800, 0.50469200],
    [0.56917200, 0.16745400, 0.50410500],
    [0.57549000, 0.16953000, 0.50346600],
    [0.58181900, 0.17159600, 0.50277700],
    [0.58815800, 0.17365200, 0.50203500],
    [0.59450800, 0.17570100, 0.50124100],
    [0.60086800, 0.17774300, 0.50039400],
    [0.60723800, 0.17977900, 0.49949200],
    [0.61361700, 0.18181100, 0.49853600],
    [0.62000500, 0.18384000, 0.49752400],
    [0.62640100, 0.18586700, 0.49645600],
    [0.63280500, 0.18789300, 0.49533200],
    [0.63921600, 0.18992100, 0.49415000],
    [0.64563300, 0.19195200, 0.49291000],
    [0.65205600, 0.19398600, 0.49161100],
    [0.65848300, 0.19602700, 0.49025300],
    [0.66491500, 0.19807500, 0.48883600],
    [0.67134900, 0.20013300, 0.48735800],
    [0.67778600, 0.20220300, 0.48581900],
    [0.68422400, 0.20428600, 0.48421900],
    [0.69066100, 0.20638400, 0.48255800],
    [0.69709800, 0.20850100, 0.48083500],
    [0.70353200, 0.21063800, 0.47904900],
    [0.70996200, 0.21279700, 0.47720100],
    [0.71638700, 0.21498200, 0.47529000],
    [0.72280500, 0.21719400, 0.47331600],
    [0.72921600, 0.21943700, 0.47127900],
    [0.73561600, 0.22171300, 0.46918000],
    [0.74200400, 0.22402500, 0.46701800],
    [0.74837800, 0.22637700, 0.46479400],
    [0.75473700, 0.22877200, 0.46250900],
    [0.76107700, 0.23121400, 0.46016200],
    [0.76739800, 0.23370500, 0.45775500],
    [0.77369500, 0.23624900, 0.45528900],
    [0.77996800, 0.23885100, 0.45276500],
    [0.78621200, 0.24151400, 0.45018400],
    [0.79242700, 0.24424200, 0.44754300],
    [0.79860800, 0.24704000, 0.44484800],
    [0.80475200, 0.24991100, 0.44210200],
    [0.81085500, 0.25286100, 0.43930500],
    [0.81691400, 0.25589500, 0.43646100],
    [0.82292600, 0.25901600, 0.43357300],
    [0.82888600, 0.26222900, 0.43064400],
    [0.83479100, 0.26554000, 0.42767100],
    [0.84063600, 0.26895300, 0.42466600],
    [0.84641600, 0.27247300, 0.42163100],
    [0.85212600, 0.27610600, 0.41857300],
    [0.85776300, 0.27985700, 0.41549600],
    [0.86332000, 0.28372900, 0.41240300],
    [0.86879300, 0.28772800, 0.40930300],
    [0.87417600, 0.29185900, 0.40620500],
    [0.87946400, 0.29612500, 0.40311800],
    [0.88465100, 0.30053000, 0.40004700],
    [0.88973100, 0.30507900, 0.39700200],
    [0.89470000, 0.30977300, 0.39399500],
    [0.89955200, 0.31461600, 0.39103700],
    [0.90428100, 0.31961000, 0.38813700],
    [0.90888400, 0.32475500, 0.38530800],
    [0.91335400, 0.33005200, 0.38256300],
    [0.91768900, 0.33550000, 0.37991500],
    [0.92188400, 0.34109800, 0.37737600],
    [0.92593700, 0.34684400, 0.37495900],
    [0.92984500, 0.35273400, 0.37267700],
    [0.93360600, 0.35876400, 0.37054100],
    [0.93722100, 0.36492900, 0.36856700],
    [0.94068700, 0.37122400, 0.36676200],
    [0.94400600, 0.37764300, 0.36513600],
    [0.94718000, 0.38417800, 0.36370100],
    [0.95021000, 0.39082000, 0.36246800],
    [0.95309900, 0.39756300, 0.36143800],
    [0.95584900, 0.40440000, 0.36061900],
    [0.95846400, 0.41132400, 0.36001400],
    [0.96094900, 0.41832300, 0.35963000],
    [0.96331000, 0.42539000, 0.35946900],
    [0.96554900, 0.43251900, 0.35952900],
    [0.96767100, 0.43970300, 0.35981000],
    [0.96968000, 0.44693600, 0.36031100],
    [0.97158200, 0.45421000, 0.36103000],
    [0.97338100, 0.46152000, 0.36196500],
    [0.97508200, 0.46886100, 0.36311100],
    [0.97669000, 0.47622600, 0.36446600],
    [0.97821000, 0.48361200, 0.36602500],
    [0.97964500, 0.49101400, 0.36778300],
    [0.98100000, 0.49842800, 0.36973400],
    [0.98227900, 0.50585100, 0.37187400],
    [0.98348500, 0.51328000, 0.37419800],
    [0.98462200, 0.52071300, 0.37669800],
    [0.98569300, 0.52814800, 0.37937100],
    [0.98670000, 0.53558200, 0.38221000],
    [0.98764600, 0.54301500, 0.38521000],
    [0.98853300, 0.55044600, 0.38836500],
    [0.98936300, 0.55787300, 0.39167100],
    [0.99013800, 0.56529600, 0.39512200],
    [0.99087100, 0.57270600, 0.39871400],
    [0.99155800, 0.58010700, 0.40244100],
    [0.99219600, 0.58750200, 0.40629900],
    [0.99278500, 0.59489100, 0.41028300],
    [0.99332600, 0.60227500, 0.41439000],
    [0.99383400, 0.60964400, 0.41861300],
    [0.99430900, 0.61699900, 0.42295000],
    [0.99473800, 0.62435000, 0.42739700],
    [0.99512200, 0.63169600, 0.43195100],
    [0.99548000, 0.63902700, 0.43660700],
    [0.99581000, 0.64634400, 0.44136100],
    [0.99609600, 0.65365900, 0.44621300],
    [0.99634100, 0.66096900, 0.45116000],
    [0.99658000, 0.66825600, 0.45619200],
    [0.99677500, 0.67554100, 0.46131400],
    [0.99692500, 0.68282800, 0.46652600],
    [0.99707700, 0.69008800, 0.47181100],
    [0.99718600, 0.69734900, 0.47718200],
    [0.99725400, 0.70461100, 0.48263500],
    [0.99732500, 0.71184800, 0.48815400],
    [0.99735100, 0.71908900, 0.49375500],
    [0.99735100, 0.72632400, 0.49942800],
    [0.99734100, 0.73354500, 0.50516700],
    [0.99728500, 0.74077200, 0.51098300],
    [0.99722800, 0.74798100, 0.51685900],
    [0.99713800, 0.75519000, 0.52280600],
    [0.99701900, 0.76239800, 0.52882100],
    [0.99689800, 0.76959100, 0.53489200],
    [0.99672700, 0.77679500, 0.54103900],
    [0.99657100, 0.78397700, 0.54723300],
    [0.99636900, 0.79116700, 0.55349900],
    [0.99616200, 0.79834800, 0.55982000],
    [0.99593200, 0.80552700, 0.56620200],
    [0.99568000, 0.81270600, 0.57264500],
    [0.99542400, 0.81987500, 0.57914000],
    [0.99513100, 0.82705200, 0.58570100],
    [0.99485100, 0.83421300, 0.59230700],
    [0.99452400, 0.84138700, 0.59898300],
    [0.99422200, 0.84854000, 0.60569600],
    [0.99386600, 0.85571100, 0.61248200],
    [0.99354500, 0.86285900, 0.61929900],
    [0.99317000, 0.87002400, 0.62618900],
    [0.99283100, 0.87716800, 0.63310900],
    [0.99244000, 0.88433000, 0.64009900],
    [0.99208900, 0.89147000, 0.64711600],
    [0.99168800, 0.89862700, 0.65420200],
    [0.99133200, 0.90576300, 0.66130900],
    [0.99093000, 0.91291500, 0.66848100],
    [0.99057000, 0.92004900, 0.67567500],
    [0.99017500, 0.92719600, 0.68292600],
    [0.98981500, 0.93432900, 0.69019800],
    [0.98943400, 0.94147000, 0.69751900],
    [0.98907700, 0.94860400, 0.70486300],
    [0.98871700, 0.95574200, 0.71224200],
    [0.98836700, 0.96287800, 0.71964900],
    [0.98803300, 0.97001200, 0.72707700],
    [0.98769100, 0.97715400, 0.73453600],
    [0.98738700, 0.98428800, 0.74200200],
    [0.98705300, 0.99143800, 0.74950400],
])

VIRIDIS = np.array([
    [0.26700400, 0.00487400, 0.32941500],
    [0.26851000, 0.00960500, 0.33542700],
    [0.26994400, 0.01462500, 0.34137900],
    [0.27130500, 0.01994200, 0.34726900],
    [0.27259400, 0.02556300, 0.35309300],
    [0.27380900, 0.03149700, 0.35885300],
    [0.27495200, 0.03775200, 0.36454300],
    [0.27602200, 0.04416700, 0.37016400],
    [0.27701800, 0.05034400, 0.37571500],
    [0.27794100, 0.05632400, 0.38119100],
    [0.27879100, 0.06214500, 0.38659200],
    [0.27956600, 0.06783600, 0.39191700],
    [0.28026700, 0.07341700, 0.39716300],
    [0.28089400, 0.07890700, 0.40232900],
    [0.28144600, 0.08432000, 0.40741400],
    [0.28192400, 0.08966600, 0.41241500],
    [0.28232700, 0.09495500, 0.41733100],
    [0.28265600, 0.10019600, 0.42216000],
    [0.28291000, 0.10539300, 0.42690200],
    [0.28309100, 0.11055300, 0.43155400],
    [0.28319700, 0.11568000, 0.43611500],
    [0.28322900, 0.12077700, 0.44058400],
    [0.28318700, 0.12584800, 0.44496000],
    [0.28307200, 0.13089500, 0.44924100],
    [0.28288400, 0.13592000, 0.45342700],
    [0.28262300, 0.14092600, 0.45751700],
    [0.28229000, 0.14591200, 0.46151000],
    [0.28188700, 0.15088100, 0.46540500],
    [0.28141200, 0.15583400, 0.46920100],
    [0.28086800, 0.16077100, 0.47289900],
    [0.28025500, 0.16569300, 0.47649800],
    [0.27957400, 0.17059900, 0.47999700],
    [0.27882600, 0.17549000, 0.48339700],
    [0.27801200, 0.18036700, 0.48669700],
    [0.27713400, 0.18522800, 0.48989800],
    [0.27619400, 0.19007400, 0.49300100],
    [0.27519100, 0.19490500, 0.49600500],
    [0.27412800, 0.19972100, 0.49891100],
    [0.27300600, 0.20452000, 0.50172100],
    [0.27182800, 0.20930300, 0.50443400],
    [0.27059500, 0.21406900, 0.50705200],
    [0.26930800, 0.21881800, 0.50957700],
    [0.26796800, 0.22354900, 0.51200800],
    [0.26658000, 0.22826200, 0.51434900],
    [0.26514500, 0.23295600, 0.51659900],
    [0.26366300, 0.23763100, 0.51876200],
    [0.26213800, 0.24228600, 0.52083700],
    [0.26057100, 0.24692200, 0.52282800],
    [0.25896500, 0.25153700, 0.52473600],
    [0.25732200, 0.25613000, 0.52656300],
    [0.25564500, 0.26070300, 0.52831200],
    [0.25393500, 0.26525400, 0.52998300],
    [0.25219400, 0.26978300, 0.53157900],
    [0.25042500, 0.27429000, 0.53310300],
    [0.24862900, 0.27877500, 0.53455600],
    [0.24681100, 0.28323700, 0.53594100],
    [0.24497200, 0.28767500, 0.53726000],
    [0.24311300, 0.29209200, 0.53851600],
    [0.24123700, 0.29648500, 0.53970900],
    [0.23934600, 0.30085500, 0.54084400],
    [0.23744100, 0.30520200, 0.54192100],
    [0.23552600, 0.30952700, 0.54294400],
    [0.23360300, 0.31382800, 0.54391400],
    [0.23167400, 0.31810600, 0.54483400],
    [0.22973900, 0.32236100, 0.54570600],
    [0.22780200, 0.32659400, 0.54653200],
    [0.22586300, 0.33080500, 0.54731400],
    [0.22392500, 0.33499400, 0.54805300],
    [0.22198900, 0.33916100, 0.54875200],
    [0.22005700, 0.34330700, 0.54941300],
    [0.21813000, 0.34743200, 0.55003800],
    [0.21621000, 0.35153500, 0.55062700],
    [0.21429800, 0.35561900, 0.55118400],
    [0.21239500, 0.35968300, 0.55171000],
    [0.21050300, 0.36372700, 0.55220600],
    [0.20862300, 0.36775200, 0.55267500],
    [0.20675600, 0.37175800, 0.55311700],
    [0.20490300, 0.37574600, 0.55353300],
    [0.20306300, 0.37971600, 0.55392500],
    [0.20123900, 0.38367000, 0.55429400],
    [0.19943000, 0.38760700, 0.55464200],
    [0.19763600, 0.39152800, 0.55496900],
    [0.19586000, 0.39543300, 0.55527600],
    [0.19410000, 0.39932300, 0.55556500],
    [0.19235700, 0.40319900, 0.55583600],
    [0.19063100, 0.40706100, 0.55608900],
    [0.18892300, 0.41091000, 0.55632600],
    [0.18723100, 0.41474600, 0.55654700],
    [0.18555600, 0.41857000, 0.55675300],
    [0.18389800, 0.42238300, 0.55694400],
    [0.18225600, 0.42618400, 0.55712000],
    [0.18062900, 0.42997500, 0.55728200],
    [0.17901900, 0.43375600, 0.55743000],
    [0.17742300, 0.43752700, 0.55756500],
    [0.17584100, 0.44129000, 0.55768500],
    [0.17427400, 0.44504400, 0.55779200],
    [0.17271900, 0.44879100, 0.55788500],
    [0.17117600, 0.45253000, 0.55796500],
    [0.16964600, 0.45626200, 0.55803000],
    [0.16812600, 0.45998800, 0.55808200],
    [0.16661700, 0.46370800, 0.55811900],
    [0.16511700, 0.46742300, 0.55814100],
    [0.16362500, 0.47113300, 0.55814800],
    [0.16214200, 0.47483800, 0.55814000],
    [0.16066500, 0.47854000, 0.55811500],
    [0.15919400, 0.48223700, 0.55807300],
    [0.15772900, 0.48593200, 0.55801300],
    [0.15627000, 0.48962400, 0.55793600],
    [0.15481500, 0.49331300, 0.55784000],
    [0.15336400, 0.49700000, 0.55772400],
    [0.15191800, 0.50068500, 0.55758700],
    [0.15047600, 0.50436900, 0.55743000],
    [0.14903900, 0.50805100, 0.55725000],
    [0.14760700, 0.51173300, 0.55704900],
    [0.14618000, 0.51541300, 0.55682300],
    [0.14475900, 0.51909300, 0.55657200],
    [0.14334300, 0.52277300, 0.55629500],
    [0.14193500, 0.52645300, 0.55599100],
    [0.14053600, 0.53013200, 0.55565900],
    [0.13914700, 0.53381200, 0.55529800],
    [0.13777000, 0.53749200, 0.55490600],
    [0.13640800, 0.54117300, 0.55448300],
    [0.13506600, 0.54485300, 0.55402900],
    [0.13374300, 0.54853500, 0.55354100],
    [0.13244400, 0.55221600, 0.55301800],
    [0.13117200, 0.55589900, 0.55245900],
    [0.12993300, 0.55958200, 0.55186400],
    [0.12872900, 0.56326500, 0.55122900],
    [0.12756800, 0.56694900, 0.55055600],
    [0.12645300, 0.57063300, 0.54984100],
    [0.12539400, 0.57431800, 0.54908600],
    [0.12439500, 0.57800200, 0.54828700],
    [0.12346300, 0.58168700, 0.54744500],
    [0.12260600, 0.58537100, 0.54655700],
    [0.12183100, 0.58905500, 0.54562300],
    [0.12114800, 0.59273900, 0.54464100],
    [0.12056500, 0.59642200, 0.54361100],
    [0.12009200, 0.60010400, 0.54253000],
    [0.11973800, 0.60378500, 0.54140000],
    [0.11951200, 0.60746400, 0.54021800],
    [0.11942300, 0.61114100, 0.53898200],
    [0.11948300, 0.61481700, 0.53769200],
    [0.11969900, 0.61849000, 0.53634700],
    [0.12008100, 0.62216100, 0.53494600],
    [0.12063800, 0.62582800, 0.53348800],
    [0.12138000, 0.62949200, 0.53197300],
    [0.12231200, 0.63315300, 0.53039800],
    [0.12344400, 0.63680900, 0.52876300],
    [0.12478000, 0.64046100, 0.52706800],
    [0.12632600, 0.64410700, 0.52531100],
    [0.12808700, 0.64774900, 0.52349100],
    [0.13006700, 0.65138400, 0.52160800],
    [0.13226800, 0.65501400, 0.51966100],
    [0.13469200, 0.65863600, 0.51764900],
    [0.13733900, 0.66225200, 0.51557100],
    [0.14021000, 0.66585900, 0.51342700],
    [0.14330300, 0.66945900, 0.51121500],
    [0.14661600, 0.67305000, 0.50893600],
    [0.15014800, 0.67663100, 0.50658900],
    [0.15389400, 0.68020300, 0.50417200],
    [0.15785100, 0.68376500, 0.50168600],
    [0.16201600, 0.68731600, 0.49912900],
    [0.16638300, 0.69085600, 0.49650200],
    [0.17094800, 0.69438400, 0.49380300],
    [0.17570700, 0.69790000, 0.49103300],
    [0.18065300, 0.70140200, 0.48818900],
    [0.18578300, 0.70489100, 0.48527300],
    [0.19109000, 0.70836600, 0.48228400],
    [0.19657100, 0.71182700, 0.47922100],
    [0.20221900, 0.71527200, 0.47608400],
    [0.20803000, 0.71870100, 0.47287300],
    [0.21400000, 0.72211400, 0.46958800],
    [0.22012400, 0.72550900, 0.46622600],
    [0.22639700, 0.72888800, 0.46278900],
    [0.23281500, 0.73224700, 0.45927700],
    [0.23937400, 0.73558800, 0.45568800],
    [0.24607000, 0.73891000, 0.45202400],
    [0.25289900, 0.74221100, 0.44828400],
    [0.25985700, 0.74549200, 0.44446700],
    [0.26694100, 0.74875100, 0.44057300],
    [0.27414900, 0.75198800, 0.43660100],
    [0.28147700, 0.75520300, 0.43255200],
    [0.28892100, 0.75839400, 0.42842600],
    [0.29647900, 0.76156100, 0.42422300],
    [0.30414800, 0.76470400, 0.41994300],
    [0.31192500, 0.76782200, 0.41558600],
    [0.31980900, 0.77091400, 0.41115200],
    [0.32779600, 0.77398000, 0.40664000],
    [0.33588500, 0.77701800, 0.40204900],
    [0.34407400, 0.78002900, 0.39738100],
    [0.35236000, 0.78301100, 0.39263600],
    [0.36074100, 0.78596400, 0.38781400],
    [0.36921400, 0.78888800, 0.38291400],
    [0.37777900, 0.79178100, 0.37793900],
    [0.38643300, 0.79464400, 0.37288600],
    [0.39517400, 0.79747500, 0.36775700],
    [0.40400100, 0.80027500, 0.36255200],
    [0.41291300, 0.80304100, 0.35726900],
    [0.42190800, 0.80577400, 0.35191000],
    [0.43098300, 0.80847300, 0.34647600],
    [0.44013700, 0.81113800, 0.34096700],
    [0.44936800, 0.81376800, 0.33538400],
    [0.45867400, 0.81636300, 0.32972700],
    [0.46805300, 0.81892100, 0.32399800],
    [0.47750400, 0.82144400, 0.31819500],
    [0.48702600, 0.82392900, 0.31232100],
    [0.49661500, 0.82637600, 0.30637700],
    [0.50627100, 0.82878600, 0.30036200],
    [0.51599200, 0.83115800, 0.29427900],
    [0.52577600, 0.83349100, 0.28812700],
    [0.53562100, 0.83578500, 0.28190800],
    [0.54552400, 0.83803900, 0.27562600],
    [0.55548400, 0.84025400, 0.26928100],
    [0.56549800, 0.84243000, 0.26287700],
    [0.57556300, 0.84456600, 0.25641500],
    [0.58567800, 0.84666100, 0.24989700],
    [0.59583900, 0.84871700, 0.24332900],
    [0.60604500, 0.85073300, 0.23671200],
    [0.61629300, 0.85270900, 0.23005200],
    [0.62657900, 0.85464500, 0.22335300],
    [0.63690200, 0.85654200, 0.21662000],
    [0.64725700, 0.85840000, 0.20986100],
    [0.65764200, 0.86021900, 0.20308200],
    [0.66805400, 0.86199900, 0.19629300],
    [0.67848900, 0.86374200, 0.18950300],
    [0.68894400, 0.86544800, 0.18272500],
    [0.69941500, 0.86711700, 0.17597100],
    [0.70989800, 0.86875100, 0.16925700],
    [0.72039100, 0.87035000, 0.16260300],
    [0.73088900, 0.87191600, 0.15602900],
    [0.74138800, 0.87344900, 0.14956100],
    [0.75188400, 0.87495100, 0.14322800],
    [0.76237300, 0.87642400, 0.13706400],
    [0.77285200, 0.87786800, 0.13110900],
    [0.78331500, 0.87928500, 0.12540500],
    [0.79376000, 0.88067800, 0.12000500],
    [0.80418200, 0.88204600, 0.11496500],
    [0.81457600, 0.88339300, 0.11034700],
    [0.82494000, 0.88472000, 0.10621700],
    [0.83527000, 0.88602900, 0.10264600],
    [0.84556100, 0.88732200, 0.09970200],
    [0.85581000, 0.88860100, 0.09745200],
    [0.86601300, 0.88986800, 0.09595300],
    [0.87616800, 0.89112500, 0.09525000],
    [0.88627100, 0.89237400, 0.09537400],
    [0.89632000, 0.89361600, 0.09633500],
    [0.90631100, 0.89485500, 0.09812500],
    [0.91624200, 0.89609100, 0.10071700],
    [0.92610600, 0.89733000, 0.10407100],
    [0.93590400, 0.89857000, 0.10813100],
    [0.94563600, 0.89981500, 0.11283800],
    [0.95530000, 0.90106500, 0.11812800],
    [0.96489400, 0.90232300, 0.12394100],
    [0.97441700, 0.90359000, 0.13021500],
    [0.98386800, 0.90486700, 0.13689700],
    [0.99324800, 0.90615700, 0.14393600],
])
