"""Regenerate src/bite/data/corpus.jsonl from the literal entries below."""
import json
from pathlib import Path

ENTRIES = [
    ("Why is the sky blue?",
     "The sky looks blue because sunlight is scattered by the gases in the atmosphere. Shorter wavelengths, such as blue and violet, are scattered much more strongly than longer red wavelengths, an effect known as Rayleigh scattering. Our eyes are more sensitive to blue than to violet, and some violet light is absorbed high in the atmosphere, so the overall colour we perceive is blue.",
     "Sunlight scatters off air molecules, and blue light scatters the most, so the sky appears blue."),
    ("How does a refrigerator keep food cold?",
     "A refrigerator moves heat from its inside to the surrounding room. A refrigerant is compressed, which raises its temperature, and it then releases heat through the coils at the back. The refrigerant expands through a valve, becomes very cold, and absorbs heat from the inside compartment as it evaporates. Repeating this cycle keeps the interior at a low, steady temperature.",
     "It pumps heat out of the box using a refrigerant that evaporates inside and condenses outside."),
    ("What is the difference between weather and climate?",
     "Weather describes the short-term state of the atmosphere at a particular place and time, such as today's rain or tomorrow's temperature. Climate is the long-term pattern of weather in a region, usually averaged over thirty years or more. A single cold week says little about climate, while a steady rise in average temperatures over decades is a change in climate.",
     "Weather is day-to-day conditions; climate is the long-term average of those conditions."),
    ("How do vaccines work?",
     "Vaccines train the immune system to recognise a pathogen without causing the disease. They contain a harmless piece of the pathogen, a weakened or inactivated form of it, or instructions for making one of its proteins. The immune system responds by producing antibodies and memory cells. If the real pathogen is encountered later, the body can respond quickly and prevent serious illness.",
     "They expose the immune system to a harmless version of a germ so it can respond faster later."),
    ("What causes the seasons on Earth?",
     "Seasons are caused by the tilt of Earth's axis, which is about 23.5 degrees relative to its orbit around the Sun. When a hemisphere is tilted toward the Sun, it receives more direct sunlight and longer days, which produces summer. When it is tilted away, sunlight arrives at a lower angle and days are shorter, which produces winter. The distance between Earth and the Sun plays only a minor role.",
     "Earth's axial tilt changes how directly sunlight hits each hemisphere during the year."),
    ("Explain what a prime number is.",
     "A prime number is a whole number greater than one that has exactly two divisors: one and itself. For example, 2, 3, 5, 7 and 11 are prime, while 9 is not because it can be divided by 3. The number 2 is the only even prime. Every whole number greater than one can be written as a product of primes in exactly one way, which is why primes are often called the building blocks of arithmetic.",
     "A prime is a number above one divisible only by one and itself, like 2, 3, 5 and 7."),
    ("Why do we need sleep?",
     "Sleep allows the body and brain to recover and to perform maintenance that is difficult while awake. During sleep the brain consolidates memories, clears metabolic waste, and regulates hormones that control appetite and growth. Lack of sleep impairs attention, mood, and decision making, and over long periods it is linked to heart disease and weakened immunity. Most adults need around seven to nine hours each night.",
     "Sleep restores the body and brain, supports memory, and keeps hormones and immunity in balance."),
    ("How does compound interest work?",
     "Compound interest means that interest is earned not only on the original amount but also on the interest already added. If you invest 1,000 dollars at 5 percent per year, you have 1,050 dollars after one year and 1,102.50 dollars after two years. Because the base keeps growing, the balance increases faster over time. The longer the money stays invested, the stronger this effect becomes.",
     "Interest is added to the balance, so later interest is calculated on a larger amount."),
    ("What is photosynthesis?",
     "Photosynthesis is the process plants, algae and some bacteria use to turn light energy into chemical energy. Using sunlight, they combine carbon dioxide from the air with water to make glucose, and they release oxygen as a by-product. The process takes place mainly in chloroplasts, which contain the green pigment chlorophyll. Photosynthesis supplies most of the oxygen in the atmosphere and the energy at the base of nearly every food chain.",
     "Plants use sunlight to turn carbon dioxide and water into sugar and oxygen."),
    ("How can I improve my public speaking?",
     "Start by preparing thoroughly, so that you know the structure of your talk and its main points. Practise out loud several times, ideally in front of a friend or a camera, and pay attention to your pace and pauses. Focus on the audience rather than on yourself, and make eye contact with a few people in different parts of the room. Finally, look for small opportunities to speak regularly, since confidence grows with experience.",
     "Prepare well, rehearse aloud, focus on your audience and practise often."),
    ("What is inflation?",
     "Inflation is the general rise in prices across an economy over time, which means each unit of money buys fewer goods and services. It is usually measured with a price index that tracks a basket of common items. Moderate inflation is normal in a growing economy, but high inflation erodes savings and makes planning difficult. Central banks often try to keep inflation near a target by adjusting interest rates.",
     None),
    ("How do airplanes stay in the air?",
     "Airplanes fly because their wings generate lift as air flows over and under them. The shape and angle of the wing cause air pressure above the wing to be lower than the pressure below it, which pushes the wing upward. Engines provide thrust to keep the plane moving forward fast enough for the wings to produce sufficient lift. Pilots adjust the lift and direction using control surfaces such as flaps, ailerons and the elevator.",
     None),
    ("What is the water cycle?",
     "The water cycle is the continuous movement of water between the Earth's surface and the atmosphere. Water evaporates from oceans, lakes and plants, rises as vapour, and cools to form clouds through condensation. It then falls back as precipitation such as rain or snow. The water collects in rivers, groundwater and oceans, and the cycle begins again.",
     None),
    ("Why is exercise good for health?",
     "Regular exercise strengthens the heart and lungs, which improves the delivery of oxygen throughout the body. It helps control body weight, lowers blood pressure, and improves the way the body handles blood sugar. Exercise also builds muscle and bone strength, which reduces the risk of falls later in life. In addition, physical activity is linked to better mood and lower rates of anxiety and depression.",
     None),
    ("How does a search engine find web pages?",
     "A search engine uses automated programs called crawlers to visit web pages and follow the links they contain. The content of each page is processed and stored in a large index, similar to the index at the back of a book. When you type a query, the engine looks up matching pages in the index and ranks them using many signals, such as relevance, page quality and how other sites link to them. The highest-ranked results are then shown to you.",
     None),
    ("What is the purpose of the United Nations?",
     "The United Nations is an international organisation founded in 1945 after the Second World War. Its main purposes are to maintain international peace and security, to develop friendly relations among nations, and to promote social progress and human rights. It provides a forum where member states can discuss problems and negotiate solutions. Specialised agencies, such as the World Health Organization, work on specific global issues.",
     None),
    ("How do I make a basic budget?",
     "To make a basic budget, first list all of your monthly income after taxes.\n\nNext, write down your fixed expenses, such as rent, insurance and loan payments, and then estimate variable costs like food and transport. Subtract your total expenses from your income to see what is left. Assign part of the remainder to savings before spending on extras, and review the budget each month to adjust it.",
     None),
    ("What are the main causes of deforestation?",
     "The largest driver of deforestation is the clearing of land for agriculture, including cattle ranching and crops such as soy and palm oil. Logging for timber and paper also removes large areas of forest, especially when it is done illegally or without replanting. Road building, mining and the growth of towns open up forests to further clearing. Fires, sometimes set deliberately, can destroy forests that are already weakened.",
     None),
    ("How does the human heart pump blood?",
     "The heart is a muscular organ with four chambers: two upper atria and two lower ventricles. Blood low in oxygen enters the right atrium, passes to the right ventricle, and is pumped to the lungs to pick up oxygen. Oxygen-rich blood returns to the left atrium, moves to the left ventricle, and is pumped out to the rest of the body. Valves between the chambers keep the blood flowing in one direction with each beat.",
     None),
    ("What is machine learning?",
     "Machine learning is a branch of artificial intelligence in which computers learn patterns from data instead of following only hand-written rules. A model is trained on examples, adjusting its internal parameters to reduce its errors. Once trained, it can make predictions or decisions about new data it has not seen before. Common applications include spam filtering, image recognition and product recommendations.",
     None),
    ("Why do leaves change colour in autumn?",
     "Leaves are green in summer because they contain large amounts of chlorophyll, which they use for photosynthesis. As days shorten and temperatures drop in autumn, trees stop producing chlorophyll and it gradually breaks down. This reveals yellow and orange pigments called carotenoids that were present all along. Some trees also produce red and purple pigments called anthocyanins, which create the brightest autumn colours.",
     None),
    ("How do electric cars work?",
     "Electric cars store energy in a large rechargeable battery pack, usually made of lithium-ion cells. The battery sends electricity to an electric motor, which turns the wheels directly or through a simple gearbox. A controller manages how much power flows to the motor based on how far the driver presses the pedal. When the car slows down, regenerative braking lets the motor act as a generator and return some energy to the battery.",
     None),
    ("What is the greenhouse effect?",
     "The greenhouse effect is the process by which certain gases in the atmosphere trap heat near the Earth's surface. Sunlight passes through the atmosphere and warms the ground, which then emits heat as infrared radiation. Gases such as carbon dioxide, methane and water vapour absorb part of this radiation and send some of it back toward the surface. Without this natural effect the Earth would be far colder, but adding more of these gases strengthens it and warms the planet.",
     None),
    ("How should I prepare for a job interview?",
     "Research the company so that you understand what it does, its values, and the role you are applying for. Review the job description and prepare short examples from your experience that show the skills it asks for. Practise answering common questions out loud and prepare a few thoughtful questions of your own. On the day, arrive a little early, dress appropriately, and bring copies of your resume.",
     None),
    ("What is DNA?",
     "DNA, or deoxyribonucleic acid, is the molecule that carries the genetic instructions of living organisms. It has the shape of a double helix, made of two strands twisted around each other. The strands are built from four chemical bases, adenine, thymine, cytosine and guanine, whose order encodes information. Cells read sections of DNA called genes to make proteins, and copy the whole molecule when they divide.",
     None),
    ("How do earthquakes happen?",
     "Earthquakes happen when stress builds up along faults, which are breaks in the Earth's crust where blocks of rock meet. The tectonic plates that make up the crust move slowly, but friction can hold the rocks in place while pressure accumulates. When the stress becomes too great, the rocks suddenly slip, releasing energy as seismic waves. These waves travel through the ground and cause the shaking we feel at the surface.",
     None),
    ("What are the benefits of reading regularly?",
     "Reading regularly expands your vocabulary and improves your writing, because you see language used in many different ways. It exercises concentration and memory, since you need to follow ideas and characters over long stretches of text. Reading also exposes you to new perspectives, places and periods of history, which can build empathy. Many people find that reading before bed is a relaxing way to reduce stress.",
     None),
    ("How does the internet deliver a web page?",
     "When you enter a web address, your computer first asks a domain name server to translate the name into a numeric IP address. Your browser then opens a connection to the server at that address and sends a request for the page. The server responds with the page's files, which travel across many networks in small packets. Your browser reassembles the packets, interprets the HTML, styles and scripts, and displays the finished page.",
     None),
    ("Why is biodiversity important?",
     "Biodiversity, the variety of life in an ecosystem, makes natural systems more stable and resilient. Different species perform different roles, such as pollinating crops, recycling nutrients and purifying water. When many species are present, an ecosystem can better withstand disease, drought or other disturbances. Biodiversity is also a source of food, medicines and materials, and many people value it for its own sake.",
     None),
    ("What is the difference between a virus and a bacterium?",
     "Bacteria are single-celled living organisms that can reproduce on their own, and many of them are harmless or even helpful. Viruses are much smaller and are not cells; they consist of genetic material inside a protein coat and can only reproduce by infecting a host cell. Because of these differences, antibiotics can treat many bacterial infections but have no effect on viruses. Viral infections are usually prevented with vaccines or treated with antiviral drugs.",
     None),
    ("How do I start learning to code?",
     "Begin by choosing one beginner-friendly language, such as Python, and stick with it while you learn the basics. Work through a structured course or tutorial that covers variables, loops, functions and simple data structures. Write small programs of your own as soon as possible, because practice matters more than reading. When you get stuck, search for the error message, and consider joining a community where you can ask questions.",
     None),
    ("What causes tides?",
     "Tides are caused mainly by the gravitational pull of the Moon on Earth's oceans. The Moon pulls the water on the side of Earth facing it, creating a bulge, and a second bulge forms on the opposite side. As Earth rotates, a given coastline passes through both bulges, producing roughly two high tides and two low tides each day. The Sun also affects tides, and when it lines up with the Moon the tides are especially strong.",
     None),
    ("Why should I drink enough water?",
     "Water makes up a large share of the human body and is involved in almost every bodily function. It helps regulate body temperature through sweating, carries nutrients to cells, and removes waste through the kidneys. Even mild dehydration can cause headaches, tiredness and difficulty concentrating. The amount needed varies with climate, activity and body size, so thirst and pale urine are useful guides.",
     None),
    ("What is a black hole?",
     "A black hole is a region of space where gravity is so strong that nothing, not even light, can escape from it. Black holes form when a very massive star collapses at the end of its life, squeezing its mass into a tiny volume. The boundary around a black hole beyond which escape is impossible is called the event horizon. Although black holes cannot be seen directly, astronomers detect them by observing their effects on nearby stars and gas.",
     None),
    ("How does recycling help the environment?",
     "Recycling turns used materials into new products, which reduces the need to extract and process raw resources. Making goods from recycled aluminium, paper or glass usually requires less energy than making them from scratch, which lowers greenhouse gas emissions. Recycling also keeps waste out of landfills and incinerators, reducing pollution of soil, water and air. Its benefits depend on sorting materials correctly so they can actually be reused.",
     None),
    ("What is the role of the mitochondria?",
     "Mitochondria are small structures inside most cells that act as the cell's power plants. They break down nutrients such as glucose and fatty acids and use oxygen to produce ATP, the molecule cells use for energy. Mitochondria also help regulate cell growth and cell death. Interestingly, they have their own small set of DNA, which is inherited from the mother.",
     None),
    ("How can I reduce stress?",
     "Regular physical activity is one of the most effective ways to reduce stress, since it releases tension and improves mood. Getting enough sleep, eating regular meals and limiting caffeine also help the body cope with pressure. Breaking large tasks into smaller steps and setting priorities can make a heavy workload feel manageable. Talking to friends or practising relaxation techniques, such as slow breathing, can calm the mind.",
     None),
    ("What is gravity?",
     "Gravity is the force by which objects with mass attract one another. On Earth it gives objects weight and makes them fall toward the ground when dropped. The strength of gravity depends on the masses involved and on the distance between them, growing weaker as the distance increases. Einstein's general theory of relativity describes gravity as the bending of space and time by mass and energy.",
     None),
    ("How do bees make honey?",
     "Worker bees collect nectar from flowers and store it in a special stomach called the honey stomach. Back at the hive, they pass the nectar to other bees, and enzymes begin to break its sugars into simpler forms. The bees deposit the nectar into wax cells and fan it with their wings to evaporate most of the water. When the honey is thick enough, they seal each cell with a wax cap to store it.",
     None),
    ("What is the difference between RAM and storage?",
     "RAM, or random access memory, is the fast, temporary memory a computer uses to hold the programs and data it is working with right now. Its contents are lost when the computer is switched off. Storage, such as a hard drive or solid-state drive, holds files and programs permanently, even without power. Having more RAM lets a computer handle more tasks at once, while more storage lets it keep more files.",
     None),
    ("Why do we have leap years?",
     "A year on the calendar has 365 days, but Earth actually takes about 365.24 days to orbit the Sun. Without a correction, the calendar would slowly drift out of step with the seasons. Adding an extra day, February 29, every four years makes up most of the difference. To fine-tune the calendar, years divisible by 100 are not leap years unless they are also divisible by 400.",
     None),
    ("How does a bill become a law in the United States?",
     "A bill is first introduced in either the House of Representatives or the Senate and sent to a committee for study. If the committee approves it, the full chamber debates and votes on it, and then the other chamber does the same. Both chambers must pass identical versions, so differences are resolved by a conference committee. The bill then goes to the President, who can sign it into law or veto it, and Congress can override a veto with a two-thirds vote in both chambers.",
     None),
    ("What are renewable energy sources?",
     "Renewable energy sources are those that are naturally replenished on a human timescale, such as sunlight, wind, flowing water and heat from the Earth. Solar panels convert sunlight into electricity, while wind turbines capture the energy of moving air. Hydropower uses the flow of rivers through dams, and geothermal plants tap heat from underground. Unlike coal or oil, these sources produce little or no greenhouse gas emissions during operation.",
     None),
    ("How do I care for a houseplant?",
     "Most houseplants need bright, indirect light, so place them near a window but out of harsh direct sun. Water them when the top few centimetres of soil feel dry, and make sure the pot has drainage holes so the roots do not sit in water. Feed them with a diluted fertiliser during the growing season in spring and summer. Wipe dust off the leaves occasionally and repot the plant when its roots fill the container.",
     None),
    ("What is the scientific method?",
     "The scientific method is a systematic way of learning about the world through observation and testing. It usually begins with a question and a hypothesis, which is a testable explanation. Scientists then design experiments or collect observations to check whether the predictions of the hypothesis hold. The results are analysed, shared with others, and used to support, revise or reject the hypothesis.",
     None),
    ("Why is the ocean salty?",
     "The ocean is salty because rivers carry dissolved minerals from rocks on land into the sea. Rainwater is slightly acidic, so it slowly breaks down rocks and picks up ions such as sodium and chloride. When ocean water evaporates, the salts stay behind, so they have accumulated over millions of years. Hydrothermal vents on the seafloor also add minerals to the water.",
     None),
    ("What does a central bank do?",
     "A central bank manages a country's money supply and financial system. Its main tool is setting short-term interest rates, which influence borrowing, spending and inflation across the economy. Central banks also supervise commercial banks, act as a lender of last resort during crises, and often issue the national currency. Examples include the Federal Reserve in the United States and the European Central Bank.",
     None),
    ("How do solar panels generate electricity?",
     "Solar panels are made of many photovoltaic cells, usually built from layers of silicon. When sunlight strikes a cell, its energy knocks electrons loose from their atoms. An electric field inside the cell pushes these electrons in one direction, creating a direct current. An inverter converts this direct current into alternating current that can power homes or feed into the grid.",
     None),
    ("What is a healthy breakfast?",
     "A healthy breakfast combines protein, fibre and healthy fats, which together keep you full and provide steady energy. Good options include oatmeal with fruit and nuts, eggs with whole-grain toast, or plain yoghurt with berries. Limiting sugary cereals and pastries helps avoid a quick spike and drop in blood sugar. Drinking water or milk instead of sweetened drinks also makes the meal healthier.",
     None),
    ("How does the immune system fight infection?",
     "The immune system defends the body in layers, starting with barriers such as the skin and mucous membranes. If germs get past these barriers, white blood cells of the innate immune system attack them quickly and trigger inflammation. The adaptive immune system then produces antibodies and specialised T cells that target the specific invader. After the infection clears, memory cells remain, allowing a faster response if the same germ returns.",
     None),
]

assert len(ENTRIES) == 50, len(ENTRIES)
out = Path(__file__).resolve().parents[1] / "src" / "bite" / "data" / "corpus.jsonl"
with out.open("w", encoding="utf-8") as fh:
    for i, (q, a, ref) in enumerate(ENTRIES):
        rec = {"question_id": f"q{i:02d}", "question": q, "a0": a}
        if ref is not None:
            rec["reference"] = ref
        fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
print("wrote", out)
