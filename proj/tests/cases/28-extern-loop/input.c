extern int next(void);
extern void put(int v);
int main() {
    int i;
    int acc;
    acc = 0;
    for (i = 0; i < 4; i = i + 1) {
        acc = acc + next();
        put(acc);
    }
    return acc;
}
