from keras.models import Sequential
from keras.layers import Dense

model = Sequential()
for i in range(3):
    model.add(Dense(16))
model.add(Dense(1))
